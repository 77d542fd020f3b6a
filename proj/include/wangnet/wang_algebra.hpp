#pragma once
// Wang-algebra kernel: polynomials over interned symbols subject to the two
// discard rules x + x = 0 and x * x = 0.  Every value is therefore a set of
// squarefree monomials with implicit coefficient 1; addition is symmetric
// difference of term sets and multiplication distributes, dropping every
// product whose factors share a symbol.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wangnet {

/// Interned symbol handle.  Symbols are created by a SymbolTable and compared
/// by identity; the table maps them back to their names for printing.
struct Symbol {
    std::int32_t id = -1;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Bidirectional name <-> Symbol interner.  Interning the same name twice
/// returns the same Symbol.  Internally synchronized so tables may be shared,
/// though typical use confines interning to a setup phase.
class SymbolTable {
  public:
    SymbolTable() = default;

    SymbolTable(const SymbolTable& other) {
        std::lock_guard lock(other.mutex_);
        names_ = other.names_;
        index_ = other.index_;
    }

    SymbolTable& operator=(const SymbolTable& other) {
        if (this != &other) {
            SymbolTable copy(other);
            std::lock_guard lock(mutex_);
            names_ = std::move(copy.names_);
            index_ = std::move(copy.index_);
        }
        return *this;
    }

    /// Returns the symbol for `name`, creating it on first use.
    Symbol intern(const std::string& name) {
        if (name.empty())
            throw std::invalid_argument("symbol name must be non-empty");
        std::lock_guard lock(mutex_);
        if (auto it = index_.find(name); it != index_.end())
            return Symbol{it->second};
        auto id = static_cast<std::int32_t>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return Symbol{id};
    }

    /// Name of an interned symbol; unknown handles are an error.
    std::string name(Symbol s) const {
        std::lock_guard lock(mutex_);
        if (s.id < 0 || static_cast<std::size_t>(s.id) >= names_.size())
            throw std::out_of_range("unknown symbol id " + std::to_string(s.id));
        return names_[static_cast<std::size_t>(s.id)];
    }

    /// True if `name` has been interned already.
    bool contains(const std::string& name) const {
        std::lock_guard lock(mutex_);
        return index_.count(name) != 0;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return names_.size();
    }

  private:
    mutable std::mutex mutex_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::int32_t> index_;
};

/// Squarefree monomial: a strictly increasing list of symbol ids.  The empty
/// monomial is the constant 1.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(Symbol s) : ids_{s.id} {}

    /// Builds a monomial from ids that must already be strictly increasing.
    static Monomial from_sorted_ids(std::vector<std::int32_t> ids) {
        for (std::size_t k = 1; k < ids.size(); ++k)
            if (ids[k - 1] >= ids[k])
                throw std::invalid_argument("monomial ids must be strictly increasing");
        Monomial m;
        m.ids_ = std::move(ids);
        return m;
    }

    std::size_t degree() const { return ids_.size(); }
    bool is_unit() const { return ids_.empty(); }
    const std::vector<std::int32_t>& ids() const { return ids_; }

    bool contains(Symbol s) const {
        return std::binary_search(ids_.begin(), ids_.end(), s.id);
    }

    /// Product of two squarefree monomials, or nullopt when they share a
    /// symbol (the x * x = 0 rule).
    static std::optional<Monomial> product(const Monomial& a, const Monomial& b) {
        Monomial out;
        out.ids_.reserve(a.ids_.size() + b.ids_.size());
        auto ia = a.ids_.begin(), ib = b.ids_.begin();
        while (ia != a.ids_.end() && ib != b.ids_.end()) {
            if (*ia == *ib)
                return std::nullopt;
            out.ids_.push_back(*ia < *ib ? *ia++ : *ib++);
        }
        out.ids_.insert(out.ids_.end(), ia, a.ids_.end());
        out.ids_.insert(out.ids_.end(), ib, b.ids_.end());
        return out;
    }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

  private:
    std::vector<std::int32_t> ids_;
};

/// Polynomial in the Wang algebra: a set of squarefree monomials combined
/// mod 2.  The default-constructed value is 0.
class WangPoly {
  public:
    WangPoly() = default;

    static WangPoly zero() { return WangPoly{}; }

    static WangPoly one() {
        WangPoly p;
        p.terms_.insert(Monomial{});
        return p;
    }

    static WangPoly term(Symbol s) {
        WangPoly p;
        p.terms_.insert(Monomial{s});
        return p;
    }

    static WangPoly term(const Monomial& m) {
        WangPoly p;
        p.terms_.insert(m);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return terms_.size() == 1 && terms_.begin()->is_unit(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::set<Monomial>& terms() const { return terms_; }

    std::size_t max_degree() const {
        std::size_t d = 0;
        for (const auto& m : terms_)
            d = std::max(d, m.degree());
        return d;
    }

    /// Adds a single monomial mod 2 (inserts it, or cancels an existing copy).
    void toggle(const Monomial& m) {
        auto [it, inserted] = terms_.insert(m);
        if (!inserted)
            terms_.erase(it);
    }

    WangPoly& operator+=(const WangPoly& rhs) {
        for (const auto& m : rhs.terms_)
            toggle(m);
        return *this;
    }

    WangPoly& operator*=(const WangPoly& rhs) {
        *this = *this * rhs;
        return *this;
    }

    friend WangPoly operator+(WangPoly a, const WangPoly& b) {
        a += b;
        return a;
    }

    friend WangPoly operator*(const WangPoly& a, const WangPoly& b) {
        WangPoly out;
        for (const auto& ma : a.terms_)
            for (const auto& mb : b.terms_)
                if (auto m = Monomial::product(ma, mb))
                    out.toggle(*m);
        return out;
    }

    friend bool operator==(const WangPoly&, const WangPoly&) = default;

    /// Evaluates the polynomial with `value_of(Symbol) -> T`.  All surviving
    /// terms carry coefficient 1, so the result is a plain sum of products.
    template <class ValueOf>
    auto evaluate_with(ValueOf&& value_of) const {
        using T = std::decay_t<std::invoke_result_t<ValueOf&, Symbol>>;
        T sum{};
        for (const auto& m : terms_) {
            T prod{1};
            for (auto id : m.ids())
                prod *= value_of(Symbol{id});
            sum += prod;
        }
        return sum;
    }

    /// Evaluates against an explicit assignment; a symbol without a value is
    /// a missing-assignment error.
    std::complex<double>
    evaluate(const std::map<Symbol, std::complex<double>>& assignment) const {
        return evaluate_with([&](Symbol s) {
            auto it = assignment.find(s);
            if (it == assignment.end())
                throw std::out_of_range("no value assigned to symbol id " +
                                        std::to_string(s.id));
            return it->second;
        });
    }

  private:
    std::set<Monomial> terms_;
};

/// Product of a sequence of polynomials under the Wang rules.  The empty
/// product is 1; a zero factor short-circuits to 0.
inline WangPoly wang_product(std::span<const WangPoly> factors) {
    WangPoly acc = WangPoly::one();
    for (const auto& f : factors) {
        acc = acc * f;
        if (acc.is_zero())
            return acc;
    }
    return acc;
}

inline WangPoly wang_product(std::initializer_list<WangPoly> factors) {
    return wang_product(std::span<const WangPoly>(factors.begin(), factors.size()));
}

/// Canonical rendering: terms sorted lexicographically by their symbol-name
/// sequences, names concatenated within a term, terms joined by '+'.
/// The identities render as "0" and "1".
inline std::string to_string(const WangPoly& p, const SymbolTable& table) {
    if (p.is_zero())
        return "0";
    std::vector<std::vector<std::string>> rows;
    rows.reserve(p.term_count());
    for (const auto& m : p.terms()) {
        std::vector<std::string> names;
        names.reserve(m.degree());
        for (auto id : m.ids())
            names.push_back(table.name(Symbol{id}));
        std::sort(names.begin(), names.end());
        rows.push_back(std::move(names));
    }
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i)
            out += '+';
        if (rows[i].empty()) {
            out += '1';
        } else {
            for (const auto& n : rows[i])
                out += n;
        }
    }
    return out;
}

}  // namespace wangnet
