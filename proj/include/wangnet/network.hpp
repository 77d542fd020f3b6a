#pragma once
// Lumped two-terminal networks and their Wang-algebra analysis: node and mesh
// matrices, spanning trees and cotrees, tree/cotree duality, and the joint
// (driving-point) impedance as a ratio of tree polynomials.

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wangnet/sym_matrix.hpp"
#include "wangnet/wang_algebra.hpp"

namespace wangnet {

/// Netlist parse or validation failure.
struct NetlistError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Supplied loop set is not a full independent basis.
struct LoopRankError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Impedance evaluation hit a zero of the tree polynomial.
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ElementKind { resistor, inductor, capacitor, impedance, symbolic };

/// Branch element.  Resistors and capacitors must be positive, inductors only
/// nonzero (bridged-coil designs legitimately call for negative inductance),
/// fixed impedances nonzero; symbolic elements carry no value at all.
struct Element {
    ElementKind kind = ElementKind::symbolic;
    std::complex<double> value{};

    static Element resistor(double ohms) { return checked({ElementKind::resistor, ohms}); }
    static Element inductor(double henries) { return checked({ElementKind::inductor, henries}); }
    static Element capacitor(double farads) { return checked({ElementKind::capacitor, farads}); }
    static Element fixed_impedance(std::complex<double> z) {
        return checked({ElementKind::impedance, z});
    }
    static Element symbolic() { return {ElementKind::symbolic, 0.0}; }

    static Element checked(Element e) {
        auto finite = [](std::complex<double> v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        };
        switch (e.kind) {
        case ElementKind::resistor:
            if (!finite(e.value) || e.value.imag() != 0.0 || e.value.real() <= 0.0)
                throw NetlistError("resistance must be a positive real value");
            break;
        case ElementKind::inductor:
            if (!finite(e.value) || e.value.imag() != 0.0 || e.value.real() == 0.0)
                throw NetlistError("inductance must be a nonzero real value");
            break;
        case ElementKind::capacitor:
            if (!finite(e.value) || e.value.imag() != 0.0 || e.value.real() <= 0.0)
                throw NetlistError("capacitance must be a positive real value");
            break;
        case ElementKind::impedance:
            if (!finite(e.value) || e.value == std::complex<double>{})
                throw NetlistError("fixed impedance must be finite and nonzero");
            break;
        case ElementKind::symbolic:
            break;
        }
        return e;
    }

    std::complex<double> impedance_at(std::complex<double> s) const {
        switch (kind) {
        case ElementKind::resistor: return value;
        case ElementKind::inductor: return s * value;
        case ElementKind::capacitor: return 1.0 / (s * value);
        case ElementKind::impedance: return value;
        case ElementKind::symbolic: break;
        }
        throw std::logic_error("symbolic element has no numeric impedance");
    }

    std::complex<double> admittance_at(std::complex<double> s) const {
        switch (kind) {
        case ElementKind::resistor: return 1.0 / value;
        case ElementKind::inductor: return 1.0 / (s * value);
        case ElementKind::capacitor: return s * value;
        case ElementKind::impedance: return 1.0 / value;
        case ElementKind::symbolic: break;
        }
        throw std::logic_error("symbolic element has no numeric admittance");
    }
};

struct Edge {
    std::string id;
    std::size_t from = 0;
    std::size_t to = 0;
    Element element;
    Symbol imp_sym;  // impedance-domain symbol, named after the edge id
    Symbol adm_sym;  // admittance-domain symbol (uppercased id, or "Y"+id)
};

/// One mesh loop: edges in walk order with their traversal direction
/// (true = from->to).  A loop that starts at the input node and ends at the
/// reference is closed through the implicit source branch.
struct Loop {
    std::vector<std::pair<std::size_t, bool>> steps;
    bool uses_source = false;

    std::set<std::size_t> edge_set() const {
        std::set<std::size_t> s;
        for (const auto& [e, dir] : steps)
            s.insert(e);
        return s;
    }
};

class NetworkBuilder;

/// Validated connected network with a designated input/reference node pair.
class Network {
  public:
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t reference() const { return reference_; }
    std::size_t input() const { return input_; }
    const SymbolTable& symbols() const { return symbols_; }
    const std::optional<std::vector<Loop>>& loops() const { return loops_; }
    const std::vector<std::vector<std::string>>& loop_ids() const { return loop_ids_; }

    std::size_t node_index(const std::string& name) const {
        auto it = node_index_.find(name);
        if (it == node_index_.end())
            throw NetlistError("unknown node '" + name + "'");
        return it->second;
    }

    std::size_t edge_index(const std::string& id) const {
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].id == id)
                return i;
        throw NetlistError("unknown edge '" + id + "'");
    }

  private:
    friend class NetworkBuilder;
    Network() = default;

    std::vector<std::string> nodes_;
    std::unordered_map<std::string, std::size_t> node_index_;
    std::vector<Edge> edges_;
    std::size_t reference_ = 0;
    std::size_t input_ = 0;
    std::optional<std::vector<Loop>> loops_;
    std::vector<std::vector<std::string>> loop_ids_;  // as supplied, for round-trips
    SymbolTable symbols_;
};

/// Admittance-domain symbol name for an edge id: the id uppercased, or
/// "Y" + id when uppercasing changes nothing.
inline std::string admittance_symbol_name(const std::string& edge_id) {
    std::string upper = edge_id;
    for (auto& c : upper)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return upper == edge_id ? "Y" + edge_id : upper;
}

class NetworkBuilder {
  public:
    NetworkBuilder& node(const std::string& name) {
        if (name.empty())
            throw NetlistError("node name must be non-empty");
        if (net_.node_index_.count(name))
            throw NetlistError("duplicate node '" + name + "'");
        net_.node_index_.emplace(name, net_.nodes_.size());
        net_.nodes_.push_back(name);
        return *this;
    }

    NetworkBuilder& reference(const std::string& name) {
        reference_ = name;
        return *this;
    }

    NetworkBuilder& input(const std::string& name) {
        input_ = name;
        return *this;
    }

    NetworkBuilder& edge(const std::string& id, const std::string& from,
                         const std::string& to, Element element) {
        if (id.empty())
            throw NetlistError("edge id must be non-empty");
        for (const auto& e : net_.edges_)
            if (e.id == id)
                throw NetlistError("duplicate edge id '" + id + "'");
        Edge e;
        e.id = id;
        e.from = net_.node_index(from);
        e.to = net_.node_index(to);
        if (e.from == e.to)
            throw NetlistError("edge '" + id + "' is a self-loop");
        e.element = Element::checked(element);
        net_.edges_.push_back(std::move(e));
        return *this;
    }

    NetworkBuilder& loop(std::vector<std::string> edge_ids) {
        net_.loop_ids_.push_back(std::move(edge_ids));
        return *this;
    }

    Network build() {
        if (net_.nodes_.size() < 2)
            throw NetlistError("network needs at least two nodes");
        if (reference_.empty())
            throw NetlistError("reference node not set");
        if (input_.empty())
            throw NetlistError("input node not set");
        net_.reference_ = net_.node_index(reference_);
        net_.input_ = net_.node_index(input_);
        if (net_.reference_ == net_.input_)
            throw NetlistError("input node must differ from the reference node");
        if (net_.edges_.empty())
            throw NetlistError("network has no edges");
        check_connected();
        intern_symbols();
        if (!net_.loop_ids_.empty())
            net_.loops_ = resolve_loops();
        return std::move(net_);
    }

  private:
    void check_connected() {
        std::vector<char> seen(net_.nodes_.size(), 0);
        std::queue<std::size_t> queue;
        queue.push(net_.reference_);
        seen[net_.reference_] = 1;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop();
            for (const auto& e : net_.edges_) {
                for (auto v : {e.from, e.to}) {
                    std::size_t other = (v == e.from) ? e.to : e.from;
                    if (v == u && !seen[other]) {
                        seen[other] = 1;
                        queue.push(other);
                    }
                }
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw NetlistError("node '" + net_.nodes_[i] +
                                   "' is not connected to the reference");
    }

    void intern_symbols() {
        std::set<std::string> names;
        for (auto& e : net_.edges_) {
            std::string adm = admittance_symbol_name(e.id);
            for (const auto& n : {e.id, adm})
                if (!names.insert(n).second)
                    throw NetlistError("symbol name collision on '" + n +
                                       "' (edge ids and their admittance names "
                                       "must be pairwise distinct)");
            e.imp_sym = net_.symbols_.intern(e.id);
            e.adm_sym = net_.symbols_.intern(adm);
        }
    }

    // Chains a user-supplied edge-id list into an oriented walk.  A closed
    // walk is an ordinary loop; an open walk must run between the input and
    // reference nodes and is closed through the implicit source branch.
    Loop resolve_walk(const std::vector<std::string>& ids, std::size_t loop_no) const {
        const std::string where = "loop " + std::to_string(loop_no + 1);
        if (ids.empty())
            throw NetlistError(where + " is empty");
        std::vector<std::size_t> edges;
        std::set<std::size_t> distinct;
        for (const auto& id : ids) {
            auto e = net_.edge_index(id);
            if (!distinct.insert(e).second)
                throw NetlistError(where + " repeats edge '" + id + "'");
            edges.push_back(e);
        }
        auto chain = [&](bool first_forward, Loop& out) {
            out.steps.clear();
            const Edge& first = net_.edges_[edges[0]];
            std::size_t start = first_forward ? first.from : first.to;
            std::size_t at = first_forward ? first.to : first.from;
            out.steps.emplace_back(edges[0], first_forward);
            for (std::size_t k = 1; k < edges.size(); ++k) {
                const Edge& e = net_.edges_[edges[k]];
                bool forward;
                if (e.from == at)
                    forward = true;
                else if (e.to == at)
                    forward = false;
                else
                    return false;
                out.steps.emplace_back(edges[k], forward);
                at = forward ? e.to : e.from;
            }
            if (at == start) {
                out.uses_source = false;
                return true;
            }
            if ((start == net_.input_ && at == net_.reference_) ||
                (start == net_.reference_ && at == net_.input_)) {
                out.uses_source = true;
                return true;
            }
            return false;
        };
        Loop out;
        if (!chain(true, out) && !chain(false, out))
            throw NetlistError(where + " is not a closed walk (or an open walk "
                                       "between the input and reference nodes)");
        return out;
    }

    std::vector<Loop> resolve_loops() const {
        std::vector<Loop> loops;
        for (std::size_t i = 0; i < net_.loop_ids_.size(); ++i)
            loops.push_back(resolve_walk(net_.loop_ids_[i], i));

        std::size_t source_loops = 0;
        for (const auto& l : loops)
            source_loops += l.uses_source ? 1 : 0;
        if (source_loops != 1)
            throw NetlistError("loop set must contain exactly one source loop "
                               "(an open walk from the input to the reference)");

        // Mesh convention: an edge shared by two loops must be traversed in
        // opposite directions, otherwise the signed mesh system the structured
        // matrix stands for would not have -z off-diagonals.
        std::map<std::size_t, std::vector<std::pair<std::size_t, bool>>> uses;
        for (std::size_t i = 0; i < loops.size(); ++i)
            for (const auto& [e, dir] : loops[i].steps)
                uses[e].emplace_back(i, dir);
        for (const auto& [e, list] : uses)
            for (std::size_t a = 0; a < list.size(); ++a)
                for (std::size_t b = a + 1; b < list.size(); ++b)
                    if (list[a].second == list[b].second)
                        throw NetlistError(
                            "edge '" + net_.edges_[e].id + "' is traversed in the "
                            "same direction by loops " + std::to_string(list[a].first + 1) +
                            " and " + std::to_string(list[b].first + 1));

        // Full-rank requirement over GF(2): the loops (with the source branch
        // as an extra coordinate) must be independent and span the augmented
        // cycle space, whose dimension is E + 1 - (N - 1) = E - N + 2.
        const std::size_t expected = net_.edges_.size() + 2 - net_.nodes_.size();
        if (loops.size() != expected)
            throw LoopRankError("expected " + std::to_string(expected) +
                                " independent loops, got " + std::to_string(loops.size()));
        const std::size_t bits = net_.edges_.size() + 1;
        const std::size_t words = (bits + 63) / 64;
        std::vector<std::vector<std::uint64_t>> basis;
        for (const auto& l : loops) {
            std::vector<std::uint64_t> v(words, 0);
            for (const auto& [e, dir] : l.steps)
                v[e / 64] ^= std::uint64_t{1} << (e % 64);
            if (l.uses_source)
                v[(bits - 1) / 64] ^= std::uint64_t{1} << ((bits - 1) % 64);
            // Reduce against the rows accepted so far.
            for (const auto& row : basis) {
                std::size_t lead = 0;
                while (lead < bits && !(row[lead / 64] >> (lead % 64) & 1))
                    ++lead;
                if (v[lead / 64] >> (lead % 64) & 1)
                    for (std::size_t w = 0; w < words; ++w)
                        v[w] ^= row[w];
            }
            bool zero = true;
            for (auto w : v)
                zero = zero && w == 0;
            if (zero)
                throw LoopRankError("loop set is linearly dependent");
            basis.push_back(std::move(v));
        }
        return loops;
    }

    Network net_;
    std::string reference_;
    std::string input_;
};

// ---------------------------------------------------------------------------
// Netlist JSON
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw NetlistError("unknown field '" + key + "' in " + where);
    }
}

inline double number_field(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number())
        throw NetlistError(where + " must be a number");
    return j.get<double>();
}

inline Element parse_element(const nlohmann::json& j, const std::string& edge_id) {
    const std::string where = "element of edge '" + edge_id + "'";
    if (!j.is_object())
        throw NetlistError(where + " must be an object");
    reject_unknown_keys(j, {"kind", "value"}, where);
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw NetlistError(where + " needs a string 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "SYM") {
        if (j.contains("value"))
            throw NetlistError(where + ": symbolic elements take no value");
        return Element::symbolic();
    }
    if (!j.contains("value"))
        throw NetlistError(where + " needs a 'value'");
    const auto& v = j.at("value");
    if (kind == "R")
        return Element::resistor(number_field(v, where + " value"));
    if (kind == "L")
        return Element::inductor(number_field(v, where + " value"));
    if (kind == "C")
        return Element::capacitor(number_field(v, where + " value"));
    if (kind == "Z") {
        if (v.is_number())
            return Element::fixed_impedance(v.get<double>());
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return Element::fixed_impedance({v[0].get<double>(), v[1].get<double>()});
        throw NetlistError(where + " value must be a number or an [re, im] pair");
    }
    throw NetlistError(where + ": unknown element kind '" + kind + "'");
}

}  // namespace detail

/// Parses a netlist document.  Unknown fields anywhere are rejected.
inline Network parse_network(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw NetlistError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw NetlistError("netlist must be a JSON object");
    detail::reject_unknown_keys(doc, {"nodes", "reference", "input", "edges", "loops"},
                                "netlist");
    for (const char* req : {"nodes", "reference", "input", "edges"})
        if (!doc.contains(req))
            throw NetlistError(std::string("netlist is missing '") + req + "'");

    NetworkBuilder b;
    if (!doc.at("nodes").is_array())
        throw NetlistError("'nodes' must be an array of names");
    for (const auto& n : doc.at("nodes")) {
        if (!n.is_string())
            throw NetlistError("'nodes' must be an array of names");
        b.node(n.get<std::string>());
    }
    if (!doc.at("reference").is_string() || !doc.at("input").is_string())
        throw NetlistError("'reference' and 'input' must be node names");
    b.reference(doc.at("reference").get<std::string>());
    b.input(doc.at("input").get<std::string>());

    if (!doc.at("edges").is_array())
        throw NetlistError("'edges' must be an array");
    for (const auto& e : doc.at("edges")) {
        if (!e.is_object())
            throw NetlistError("each edge must be an object");
        detail::reject_unknown_keys(e, {"id", "from", "to", "element"}, "edge");
        for (const char* req : {"id", "from", "to", "element"})
            if (!e.contains(req))
                throw NetlistError(std::string("edge is missing '") + req + "'");
        for (const char* s : {"id", "from", "to"})
            if (!e.at(s).is_string())
                throw NetlistError(std::string("edge '") + s + "' must be a string");
        const std::string id = e.at("id").get<std::string>();
        b.edge(id, e.at("from").get<std::string>(), e.at("to").get<std::string>(),
               detail::parse_element(e.at("element"), id));
    }

    if (doc.contains("loops")) {
        if (!doc.at("loops").is_array())
            throw NetlistError("'loops' must be an array of edge-id arrays");
        for (const auto& l : doc.at("loops")) {
            if (!l.is_array())
                throw NetlistError("'loops' must be an array of edge-id arrays");
            std::vector<std::string> ids;
            for (const auto& id : l) {
                if (!id.is_string())
                    throw NetlistError("loop entries must be edge ids");
                ids.push_back(id.get<std::string>());
            }
            b.loop(std::move(ids));
        }
    }
    return b.build();
}

/// Serializes a network back to netlist JSON (round-trips parse_network).
inline std::string to_netlist_json(const Network& net) {
    nlohmann::ordered_json doc;
    doc["nodes"] = net.nodes();
    doc["reference"] = net.nodes()[net.reference()];
    doc["input"] = net.nodes()[net.input()];
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : net.edges()) {
        nlohmann::ordered_json el;
        switch (e.element.kind) {
        case ElementKind::resistor:
            el = {{"kind", "R"}, {"value", e.element.value.real()}};
            break;
        case ElementKind::inductor:
            el = {{"kind", "L"}, {"value", e.element.value.real()}};
            break;
        case ElementKind::capacitor:
            el = {{"kind", "C"}, {"value", e.element.value.real()}};
            break;
        case ElementKind::impedance:
            el = {{"kind", "Z"},
                  {"value", {e.element.value.real(), e.element.value.imag()}}};
            break;
        case ElementKind::symbolic:
            el = {{"kind", "SYM"}};
            break;
        }
        doc["edges"].push_back({{"id", e.id},
                                {"from", net.nodes()[e.from]},
                                {"to", net.nodes()[e.to]},
                                {"element", el}});
    }
    if (!net.loop_ids().empty())
        doc["loops"] = net.loop_ids();
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Node and mesh systems
// ---------------------------------------------------------------------------

struct NodeSystem {
    StructuredSymMatrix matrix;
    std::vector<std::size_t> row_node;  // network node index per matrix row
    std::size_t input_row = 0;
};

/// (N-1) x (N-1) node-admittance structure: rows are the non-reference nodes
/// in declaration order; edges between two such nodes accumulate into the
/// off-diagonal pair, edges to the reference into the row's diagonal extra.
inline NodeSystem node_matrix(const Network& net) {
    std::vector<std::size_t> row_of(net.nodes().size(), SIZE_MAX);
    NodeSystem sys{StructuredSymMatrix(net.nodes().size() - 1), {}, 0};
    for (std::size_t n = 0; n < net.nodes().size(); ++n) {
        if (n == net.reference())
            continue;
        row_of[n] = sys.row_node.size();
        sys.row_node.push_back(n);
    }
    sys.input_row = row_of[net.input()];
    for (const auto& e : net.edges()) {
        if (e.from == net.reference())
            sys.matrix.add_diag_extra(row_of[e.to], e.adm_sym);
        else if (e.to == net.reference())
            sys.matrix.add_diag_extra(row_of[e.from], e.adm_sym);
        else
            sys.matrix.add_offdiag(row_of[e.from], row_of[e.to], e.adm_sym);
    }
    return sys;
}

/// Fundamental-cycle loop basis: spanning tree rooted at the reference, one
/// cycle per non-tree edge, plus the source loop along the tree path from the
/// input to the reference.  Returned with the source loop first.
inline std::vector<Loop> fallback_loops(const Network& net) {
    const std::size_t nn = net.nodes().size();
    std::vector<std::size_t> parent_edge(nn, SIZE_MAX);
    std::vector<char> in_tree(net.edges().size(), 0);
    std::vector<char> seen(nn, 0);
    std::queue<std::size_t> queue;
    queue.push(net.reference());
    seen[net.reference()] = 1;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop();
        for (std::size_t k = 0; k < net.edges().size(); ++k) {
            const auto& e = net.edges()[k];
            std::size_t other;
            if (e.from == u)
                other = e.to;
            else if (e.to == u)
                other = e.from;
            else
                continue;
            if (!seen[other]) {
                seen[other] = 1;
                parent_edge[other] = k;
                in_tree[k] = 1;
                queue.push(other);
            }
        }
    }

    // Walk from a node to the reference along tree edges, each step oriented
    // in the direction of travel.
    auto path_to_reference = [&](std::size_t node) {
        std::vector<std::pair<std::size_t, bool>> path;
        while (node != net.reference()) {
            const auto k = parent_edge[node];
            const auto& e = net.edges()[k];
            const bool forward = (e.from == node);
            path.emplace_back(k, forward);
            node = forward ? e.to : e.from;
        }
        return path;
    };

    std::vector<Loop> loops;
    {
        Loop source;
        source.uses_source = true;
        source.steps = path_to_reference(net.input());
        loops.push_back(std::move(source));
    }
    for (std::size_t k = 0; k < net.edges().size(); ++k) {
        if (in_tree[k])
            continue;
        const auto& e = net.edges()[k];
        Loop l;
        l.steps.emplace_back(k, true);
        auto down = path_to_reference(e.to);
        auto up = path_to_reference(e.from);
        // Trim the common tail so the walk closes at the endpoints' junction.
        while (!down.empty() && !up.empty() && down.back() == up.back()) {
            down.pop_back();
            up.pop_back();
        }
        for (const auto& step : down)
            l.steps.push_back(step);
        for (auto it = up.rbegin(); it != up.rend(); ++it)
            l.steps.emplace_back(it->first, !it->second);
        loops.push_back(std::move(l));
    }
    return loops;
}

struct MeshSystem {
    StructuredSymMatrix matrix;
    std::vector<Loop> loops;  // row order; the source (input) loop is row 0
    std::size_t input_row = 0;
};

/// Mesh-impedance structure over the network's loop basis (the supplied one,
/// or the fundamental-cycle fallback).  Off-diagonal pairs collect the edges
/// shared by two loops; each diagonal extra completes its row so the row sum
/// is exactly the sum of the loop's edge symbols.  The source branch carries
/// no symbol.
inline MeshSystem mesh_matrix(const Network& net) {
    std::vector<Loop> loops = net.loops() ? *net.loops() : fallback_loops(net);
    // Source loop first.
    for (std::size_t i = 0; i < loops.size(); ++i)
        if (loops[i].uses_source && i != 0)
            std::swap(loops[0], loops[i]);
    MeshSystem sys{StructuredSymMatrix(loops.size()), {}, 0};
    std::vector<std::set<std::size_t>> sets;
    sets.reserve(loops.size());
    for (const auto& l : loops)
        sets.push_back(l.edge_set());
    for (std::size_t i = 0; i < loops.size(); ++i)
        for (std::size_t j = i + 1; j < loops.size(); ++j)
            for (auto e : sets[i])
                if (sets[j].count(e))
                    sys.matrix.add_offdiag(i, j, net.edges()[e].imp_sym);
    for (std::size_t i = 0; i < loops.size(); ++i) {
        WangPoly extra;
        for (auto e : sets[i])
            extra += WangPoly::term(net.edges()[e].imp_sym);
        for (std::size_t j = 0; j < loops.size(); ++j)
            if (j != i)
                extra += sys.matrix.offdiag(i, j);
        sys.matrix.add_diag_extra(i, extra);
    }
    sys.loops = std::move(loops);
    return sys;
}

// ---------------------------------------------------------------------------
// Trees, cotrees, duality
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<std::size_t>>
terms_as_edge_sets(const WangPoly& p, const Network& net, bool admittance_domain) {
    std::unordered_map<std::int32_t, std::size_t> edge_of;
    for (std::size_t k = 0; k < net.edges().size(); ++k)
        edge_of.emplace(admittance_domain ? net.edges()[k].adm_sym.id
                                          : net.edges()[k].imp_sym.id,
                        k);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(p.term_count());
    for (const auto& m : p.terms()) {
        std::vector<std::size_t> edges;
        edges.reserve(m.degree());
        for (auto id : m.ids()) {
            auto it = edge_of.find(id);
            if (it == edge_of.end())
                throw std::logic_error("determinant term contains a non-edge symbol");
            edges.push_back(it->second);
        }
        std::sort(edges.begin(), edges.end());
        out.push_back(std::move(edges));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// All spanning trees, as sorted edge-index sets in canonical order, read off
/// the node determinant.
inline std::vector<std::vector<std::size_t>> spanning_trees(const Network& net) {
    return detail::terms_as_edge_sets(wang_det(node_matrix(net).matrix), net, true);
}

/// Complements of the spanning trees, in canonical order.
inline std::vector<std::vector<std::size_t>> cotrees(const Network& net) {
    auto trees = spanning_trees(net);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(trees.size());
    for (const auto& t : trees) {
        std::vector<std::size_t> c;
        std::set<std::size_t> in_tree(t.begin(), t.end());
        for (std::size_t k = 0; k < net.edges().size(); ++k)
            if (!in_tree.count(k))
                c.push_back(k);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Spanning-tree count: node structure instantiated with every admittance set
/// to 1, evaluated by exact integer elimination.
inline std::int64_t count_trees(const Network& net) {
    auto sys = node_matrix(net);
    auto a = instantiate<std::int64_t>(sys.matrix, [](Symbol) { return std::int64_t{1}; });
    return bareiss_det(a);
}

/// Tree/cotree duality: the terms of the mesh determinant taken over the
/// non-source loops must be exactly the cotrees of the node determinant.
inline bool duality_check(const Network& net) {
    auto mesh = mesh_matrix(net);
    auto inner = wang_det(mesh.matrix.without(mesh.input_row));
    return detail::terms_as_edge_sets(inner, net, false) == cotrees(net);
}

// ---------------------------------------------------------------------------
// Joint (driving-point) impedance
// ---------------------------------------------------------------------------

inline constexpr double kPoleDenominatorFloor = 1e-300;

/// Driving-point impedance as a ratio of Wang determinants of the node
/// structure: numerator with the input row removed, denominator full.
/// Construction expands the polynomials once; evaluation at any number of
/// frequencies is then read-only and safe to run concurrently.
class RationalImpedance {
  public:
    explicit RationalImpedance(const Network& net) {
        auto sys = node_matrix(net);
        den_ = wang_det(sys.matrix);
        num_ = wang_det(sys.matrix.without(sys.input_row));
        for (const auto& e : net.edges())
            element_of_.emplace(e.adm_sym.id, e.element);
    }

    const WangPoly& numerator() const { return num_; }
    const WangPoly& denominator() const { return den_; }

    std::complex<double> at(std::complex<double> s) const {
        auto value_of = [&](Symbol sym) {
            return element_of_.at(sym.id).admittance_at(s);
        };
        const auto den = den_.evaluate_with(value_of);
        if (std::abs(den) < kPoleDenominatorFloor)
            throw PoleError("impedance pole: tree polynomial vanishes at s = (" +
                            std::to_string(s.real()) + ", " +
                            std::to_string(s.imag()) + ")");
        return num_.evaluate_with(value_of) / den;
    }

  private:
    WangPoly num_;
    WangPoly den_;
    std::unordered_map<std::int32_t, Element> element_of_;
};

inline std::complex<double> joint_impedance(const Network& net, std::complex<double> s) {
    return RationalImpedance(net).at(s);
}

}  // namespace wangnet
