#include "dbnci/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

// "L'" -> (L, primed); "L" -> (L, unprimed).
std::pair<std::string, bool> split_primed(const std::string& name) {
    if (!name.empty() && name.back() == '\'')
        return {name.substr(0, name.size() - 1), true};
    return {name, false};
}

std::string slice_var_name(const DBNTemplate& tmpl, SliceVar sv) {
    return tmpl.variables[sv.var].name + (sv.primed ? "'" : "");
}

std::string json_scalar_to_string(const json& v, const std::string& context) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    throw ParseError(context + ": expected a string or integer value");
}

Rational json_rational(const json& v, const std::string& context) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return make_rational(v.get<long long>());
    if (v.is_number_unsigned()) return make_rational(static_cast<long>(v.get<unsigned long long>()));
    if (v.is_number_float())
        throw ParseError(context +
                         ": float literals lose exactness once parsed to binary; write the value "
                         "as a string (\"1/5\" or \"0.2\") or an integer");
    throw ParseError(context + ": expected a rational value");
}

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ParseError(context + ": unknown key '" + it.key() + "'");
    }
}

std::vector<std::string> names_of(const DBNTemplate& tmpl, const std::vector<int>& vars) {
    std::vector<std::string> out;
    out.reserve(vars.size());
    for (int v : vars) out.push_back(tmpl.variables[v].name);
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

int DBNTemplate::index_of(const std::string& name) const {
    for (const auto& v : variables)
        if (v.name == name) return v.index;
    return -1;
}

std::vector<std::pair<int, int>> DBNTemplate::intra_step_edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [src, tgt] : step_edges)
        if (src.primed) out.emplace_back(src.var, tgt);
    return out;
}

std::vector<std::pair<int, int>> DBNTemplate::cross_step_edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [src, tgt] : step_edges)
        if (!src.primed) out.emplace_back(src.var, tgt);
    return out;
}

int BNTemplate::add_node(std::string name) {
    auto [it, inserted] = index_.emplace(std::move(name), static_cast<int>(nodes.size()));
    if (!inserted) throw ValidationError("duplicate node '" + it->first + "'");
    nodes.push_back(it->first);
    return it->second;
}

void BNTemplate::add_edge(int from, int to) {
    edges.emplace_back(from, to);
}

void BNTemplate::finalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const int n = static_cast<int>(nodes.size());
    parents.assign(n, {});
    children.assign(n, {});
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ValidationError("edge endpoint out of range");
        children[u].push_back(v);
        parents[v].push_back(u);
    }

    // Kahn's algorithm; anything left over sits on a cycle.
    std::vector<int> indeg(n);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(parents[v].size());
    std::deque<int> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    int seen = 0;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        ++seen;
        for (int c : children[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    if (seen != n) {
        for (int v = 0; v < n; ++v)
            if (indeg[v] > 0)
                throw ValidationError("graph is not acyclic: node '" + nodes[v] +
                                      "' lies on a cycle");
    }
}

int BNTemplate::node_index(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

void CIProposition::canonicalize() {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::sort(z.begin(), z.end());
    if (y < x) std::swap(x, y);
}

std::string CIProposition::to_string(const DBNTemplate& tmpl) const {
    std::string out = "indep(" + join(names_of(tmpl, x), ",") + ";" + join(names_of(tmpl, y), ",");
    if (!z.empty()) out += "|" + join(names_of(tmpl, z), ",");
    out += ")";
    return out;
}

int PropositionSet::intern(CIProposition p) {
    p.canonicalize();
    int at = find(p);
    if (at >= 0) return at;
    props.push_back(std::move(p));
    return static_cast<int>(props.size()) - 1;
}

int PropositionSet::find(const CIProposition& p) const {
    for (std::size_t i = 0; i < props.size(); ++i)
        if (props[i] == p) return static_cast<int>(i);
    return -1;
}

std::string letter_to_string(Letter letter, const std::vector<CIProposition>& props,
                             const DBNTemplate& tmpl) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (!(letter >> i & 1)) continue;
        if (!first) out += ", ";
        first = false;
        out += props[i].to_string(tmpl);
    }
    out += "}";
    return out;
}

int DBN::value_index(int var, const std::string& value) const {
    const auto& dom = domains[var];
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (dom[i] == value) return static_cast<int>(i);
    return -1;
}

void validate_template(const DBNTemplate& tmpl) {
    std::set<std::string> seen;
    for (int i = 0; i < tmpl.n(); ++i) {
        const auto& v = tmpl.variables[i];
        if (v.index != i)
            throw ValidationError("variable index mismatch for '" + v.name + "'");
        if (!valid_identifier(v.name))
            throw ValidationError("variable name '" + v.name +
                                  "' is not an identifier (letters, digits, '_')");
        if (!seen.insert(v.name).second)
            throw ValidationError("duplicate variable '" + v.name + "'");
    }
    auto check_var = [&](int v) {
        if (v < 0 || v >= tmpl.n()) throw ValidationError("edge references an unknown variable");
    };
    for (const auto& [u, v] : tmpl.initial_edges) {
        check_var(u);
        check_var(v);
    }
    for (const auto& [src, tgt] : tmpl.step_edges) {
        check_var(src.var);
        check_var(tgt);
    }

    // Slice 0 and the replicated within-slice relation must each be a DAG;
    // cross-slice edges can never close a cycle in the unfolding.
    BNTemplate slice0;
    for (const auto& v : tmpl.variables) slice0.add_node(v.name);
    for (const auto& [u, v] : tmpl.initial_edges) slice0.add_edge(u, v);
    slice0.finalize();

    BNTemplate intra;
    for (const auto& v : tmpl.variables) intra.add_node(v.name);
    for (const auto& [u, v] : tmpl.intra_step_edges()) intra.add_edge(u, v);
    intra.finalize();
}

bool is_restricted(const DBNTemplate& tmpl) {
    auto intra = tmpl.intra_step_edges();
    std::sort(intra.begin(), intra.end());
    for (const auto& e : tmpl.initial_edges)
        if (!std::binary_search(intra.begin(), intra.end(), e)) return false;
    return true;
}

BNTemplate initial_bn(const DBNTemplate& tmpl) {
    BNTemplate bn;
    for (const auto& v : tmpl.variables) bn.add_node(v.name);
    for (const auto& [u, v] : tmpl.initial_edges) bn.add_edge(u, v);
    bn.finalize();
    return bn;
}

// --- proposition parsing ---------------------------------------------------

namespace {

struct PropCursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ParseError("proposition: expected '" + std::string(1, c) + "' at position " +
                             std::to_string(pos) + " in '" + text + "'");
    }
    std::string identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start)
            throw ParseError("proposition: expected a variable name at position " +
                             std::to_string(pos) + " in '" + text + "'");
        return text.substr(start, pos - start);
    }
};

std::vector<int> parse_name_list(PropCursor& cur, const DBNTemplate& tmpl) {
    std::vector<int> out;
    do {
        std::string name = cur.identifier();
        int idx = tmpl.index_of(name);
        if (idx < 0) throw ValidationError("unknown variable '" + name + "' in proposition");
        out.push_back(idx);
    } while (cur.eat(','));
    return out;
}

}  // namespace

CIProposition parse_proposition(const std::string& text, const DBNTemplate& tmpl,
                                CIProposition::Kind kind) {
    PropCursor cur{text};
    if (cur.identifier() != "indep")
        throw ParseError("proposition must start with 'indep(': '" + text + "'");
    cur.expect('(');
    CIProposition p;
    p.kind = kind;
    p.x = parse_name_list(cur, tmpl);
    cur.expect(';');
    p.y = parse_name_list(cur, tmpl);
    if (cur.eat('|')) p.z = parse_name_list(cur, tmpl);
    cur.expect(')');
    cur.skip_ws();
    if (cur.pos != text.size())
        throw ParseError("proposition: trailing input at position " + std::to_string(cur.pos) +
                         " in '" + text + "'");

    if (p.x.empty() || p.y.empty())
        throw ValidationError("proposition needs non-empty sets on both sides of ';'");
    std::set<int> all;
    for (const auto* s : {&p.x, &p.y, &p.z})
        for (int v : *s)
            if (!all.insert(v).second)
                throw ValidationError("proposition sets must be pairwise disjoint: '" +
                                      tmpl.variables[v].name + "' appears twice");
    p.canonicalize();
    return p;
}

// --- JSON model parsing ----------------------------------------------------

namespace {

SliceVar parse_slice_var(const std::string& raw, const DBNTemplate& tmpl, bool allow_primed,
                         const std::string& context) {
    auto [base, primed] = split_primed(raw);
    int idx = tmpl.index_of(base);
    if (idx < 0) throw ValidationError(context + ": unknown variable '" + raw + "'");
    if (primed && !allow_primed)
        throw ValidationError(context + ": primed variable '" + raw + "' is not allowed here");
    return SliceVar{idx, primed};
}

CPDTable parse_cpd(const json& spec, const DBN& dbn, SliceVar child, const std::string& context) {
    const DBNTemplate& tmpl = dbn.tmpl;
    check_known_keys(spec, {"parents", "table"}, context);
    if (!spec.contains("parents") || !spec["parents"].is_array())
        throw ParseError(context + ": missing 'parents' array");
    if (!spec.contains("table") || !spec["table"].is_array())
        throw ParseError(context + ": missing 'table' array");

    CPDTable cpd;
    cpd.child = child;
    for (const auto& p : spec["parents"]) {
        std::string raw = json_scalar_to_string(p, context + ": parent");
        cpd.parent_order.push_back(parse_slice_var(raw, tmpl, child.primed, context));
    }

    // The declared parents must be exactly the template-induced parent set.
    std::vector<SliceVar> declared = cpd.parent_order;
    std::sort(declared.begin(), declared.end());
    if (std::adjacent_find(declared.begin(), declared.end()) != declared.end())
        throw ValidationError(context + ": duplicate parent");
    std::vector<SliceVar> expected;
    if (child.primed) {
        for (const auto& [src, tgt] : tmpl.step_edges)
            if (tgt == child.var) expected.push_back(src);
    } else {
        for (const auto& [u, v] : tmpl.initial_edges)
            if (v == child.var) expected.push_back(SliceVar{u, false});
    }
    std::sort(expected.begin(), expected.end());
    if (declared != expected)
        throw ValidationError(context + ": parent list does not match the template edges into '" +
                              slice_var_name(tmpl, child) + "'");

    std::size_t row_count = 1;
    for (const auto& p : cpd.parent_order) row_count *= dbn.domain_size(p.var);
    const int child_dom = dbn.domain_size(child.var);

    std::vector<bool> filled(row_count, false);
    cpd.rows.assign(row_count, {});
    for (const auto& entry : spec["table"]) {
        check_known_keys(entry, {"given", "dist"}, context + ": table row");
        if (!entry.contains("given") || !entry["given"].is_array() || !entry.contains("dist") ||
            !entry["dist"].is_array())
            throw ParseError(context + ": table rows need 'given' and 'dist' arrays");
        if (entry["given"].size() != cpd.parent_order.size())
            throw ValidationError(context + ": 'given' tuple length does not match parents");

        std::size_t row = 0, stride = 1;
        for (std::size_t i = 0; i < cpd.parent_order.size(); ++i) {
            int pvar = cpd.parent_order[i].var;
            std::string val = json_scalar_to_string(entry["given"][i], context + ": given value");
            int vi = dbn.value_index(pvar, val);
            if (vi < 0)
                throw ValidationError(context + ": value '" + val + "' is not in the domain of '" +
                                      tmpl.variables[pvar].name + "'");
            row += static_cast<std::size_t>(vi) * stride;
            stride *= dbn.domain_size(pvar);
        }
        if (filled[row]) throw ValidationError(context + ": duplicate row for a parent assignment");
        filled[row] = true;

        if (static_cast<int>(entry["dist"].size()) != child_dom)
            throw ValidationError(context + ": 'dist' length does not match the child domain");
        std::vector<Rational> dist;
        Rational sum = 0;
        for (const auto& q : entry["dist"]) {
            Rational r = json_rational(q, context + ": dist entry");
            if (sgn(r) < 0) throw ValidationError(context + ": negative probability");
            sum += r;
            dist.push_back(std::move(r));
        }
        if (sum != 1)
            throw ValidationError(context + ": row distribution sums to " + format_rational(sum) +
                                  ", not 1");
        cpd.rows[row] = std::move(dist);
    }
    for (std::size_t r = 0; r < row_count; ++r)
        if (!filled[r])
            throw ValidationError(context + ": missing a row for some parent assignment");
    return cpd;
}

}  // namespace

ModelFile parse_dbn(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("model: top level must be an object");
    check_known_keys(doc, {"variables", "initial_edges", "step_edges", "domains", "cpds",
                           "propositions"},
                     "model");

    ModelFile out;
    DBNTemplate& tmpl = out.tmpl;

    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw ParseError("model: missing 'variables' array");
    for (const auto& v : doc["variables"]) {
        std::string name = json_scalar_to_string(v, "model: variable");
        tmpl.variables.push_back(VariableId{name, static_cast<int>(tmpl.variables.size())});
    }

    auto parse_edge_array = [&](const char* key, bool step) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_array()) throw ParseError(std::string("model: '") + key + "' must be an array");
        for (const auto& e : doc[key]) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError(std::string("model: each entry of '") + key +
                                 "' must be a [from, to] pair");
            std::string from = json_scalar_to_string(e[0], "model: edge");
            std::string to = json_scalar_to_string(e[1], "model: edge");
            if (step) {
                SliceVar src = parse_slice_var(from, tmpl, true, "step edge");
                auto [to_base, to_primed] = split_primed(to);
                if (!to_primed)
                    throw ValidationError("step edge must target a primed variable: [" + from +
                                          ", " + to + "]");
                int tgt = tmpl.index_of(to_base);
                if (tgt < 0) throw ValidationError("step edge: unknown variable '" + to + "'");
                tmpl.step_edges.emplace_back(src, tgt);
            } else {
                SliceVar u = parse_slice_var(from, tmpl, false, "initial edge");
                SliceVar v = parse_slice_var(to, tmpl, false, "initial edge");
                tmpl.initial_edges.emplace_back(u.var, v.var);
            }
        }
    };
    parse_edge_array("initial_edges", false);
    parse_edge_array("step_edges", true);

    std::sort(tmpl.initial_edges.begin(), tmpl.initial_edges.end());
    tmpl.initial_edges.erase(std::unique(tmpl.initial_edges.begin(), tmpl.initial_edges.end()),
                             tmpl.initial_edges.end());
    std::sort(tmpl.step_edges.begin(), tmpl.step_edges.end());
    tmpl.step_edges.erase(std::unique(tmpl.step_edges.begin(), tmpl.step_edges.end()),
                          tmpl.step_edges.end());

    validate_template(tmpl);

    if (doc.contains("propositions")) {
        if (!doc["propositions"].is_array())
            throw ParseError("model: 'propositions' must be an array of strings");
        for (const auto& p : doc["propositions"]) {
            if (!p.is_string()) throw ParseError("model: 'propositions' must be an array of strings");
            out.propositions.push_back(p.get<std::string>());
            parse_proposition(out.propositions.back(), tmpl);  // fail fast on bad text
        }
    }

    const bool has_domains = doc.contains("domains");
    const bool has_cpds = doc.contains("cpds");
    if (!has_domains && !has_cpds) return out;

    DBN dbn;
    dbn.tmpl = tmpl;
    dbn.domains.assign(tmpl.n(), {"0", "1"});
    if (has_domains) {
        if (!doc["domains"].is_object()) throw ParseError("model: 'domains' must be an object");
        for (auto it = doc["domains"].begin(); it != doc["domains"].end(); ++it) {
            int var = tmpl.index_of(it.key());
            if (var < 0) throw ValidationError("domains: unknown variable '" + it.key() + "'");
            if (!it.value().is_array())
                throw ParseError("domains: entry for '" + it.key() + "' must be an array");
            std::vector<std::string> dom;
            for (const auto& v : it.value())
                dom.push_back(json_scalar_to_string(v, "domain value"));
            dbn.domains[var] = std::move(dom);
        }
    }
    for (int v = 0; v < tmpl.n(); ++v) {
        if (dbn.domains[v].size() < 2)
            throw ValidationError("domain of '" + tmpl.variables[v].name +
                                  "' needs at least two values");
        std::set<std::string> uniq(dbn.domains[v].begin(), dbn.domains[v].end());
        if (uniq.size() != dbn.domains[v].size())
            throw ValidationError("domain of '" + tmpl.variables[v].name +
                                  "' has duplicate values");
    }

    if (!has_cpds)
        throw ValidationError("model: 'domains' given without 'cpds'; a parameterized model "
                              "needs both");
    if (!doc["cpds"].is_object()) throw ParseError("model: 'cpds' must be an object");

    dbn.initial_cpds.assign(tmpl.n(), {});
    dbn.step_cpds.assign(tmpl.n(), {});
    std::vector<bool> have_init(tmpl.n(), false), have_step(tmpl.n(), false);
    for (auto it = doc["cpds"].begin(); it != doc["cpds"].end(); ++it) {
        auto [base, primed] = split_primed(it.key());
        int var = tmpl.index_of(base);
        if (var < 0) throw ValidationError("cpds: unknown variable '" + it.key() + "'");
        std::string context = "cpd for '" + it.key() + "'";
        CPDTable cpd = parse_cpd(it.value(), dbn, SliceVar{var, primed}, context);
        if (primed) {
            if (have_step[var]) throw ValidationError(context + ": duplicate");
            have_step[var] = true;
            dbn.step_cpds[var] = std::move(cpd);
        } else {
            if (have_init[var]) throw ValidationError(context + ": duplicate");
            have_init[var] = true;
            dbn.initial_cpds[var] = std::move(cpd);
        }
    }
    for (int v = 0; v < tmpl.n(); ++v) {
        if (!have_init[v])
            throw ValidationError("missing CPD for '" + tmpl.variables[v].name + "'");
        if (!have_step[v])
            throw ValidationError("missing CPD for '" + tmpl.variables[v].name + "''");
    }

    out.dbn = std::move(dbn);
    return out;
}

void validate_dbn(const DBN& dbn) {
    validate_template(dbn.tmpl);
    const int n = dbn.tmpl.n();
    if (static_cast<int>(dbn.domains.size()) != n ||
        static_cast<int>(dbn.initial_cpds.size()) != n ||
        static_cast<int>(dbn.step_cpds.size()) != n)
        throw ValidationError("DBN tables must cover every variable");
    // Round-trip through the canonical text form reuses the full table checks.
    ModelFile reparsed = parse_dbn(print_dbn(dbn));
    if (!reparsed.dbn || !(*reparsed.dbn == dbn))
        throw ValidationError("DBN failed canonical round-trip validation");
}

// --- printing --------------------------------------------------------------

namespace {

ordered_json template_json(const DBNTemplate& tmpl, const std::vector<std::string>& propositions) {
    ordered_json doc;
    doc["variables"] = ordered_json::array();
    for (const auto& v : tmpl.variables) doc["variables"].push_back(v.name);
    doc["initial_edges"] = ordered_json::array();
    for (const auto& [u, v] : tmpl.initial_edges)
        doc["initial_edges"].push_back({tmpl.variables[u].name, tmpl.variables[v].name});
    doc["step_edges"] = ordered_json::array();
    for (const auto& [src, tgt] : tmpl.step_edges)
        doc["step_edges"].push_back(
            {slice_var_name(tmpl, src), tmpl.variables[tgt].name + "'"});
    if (!propositions.empty()) doc["propositions"] = propositions;
    return doc;
}

ordered_json cpd_json(const DBN& dbn, const CPDTable& cpd) {
    const DBNTemplate& tmpl = dbn.tmpl;
    ordered_json spec;
    spec["parents"] = ordered_json::array();
    for (const auto& p : cpd.parent_order) spec["parents"].push_back(slice_var_name(tmpl, p));

    std::size_t row_count = cpd.rows.size();
    spec["table"] = ordered_json::array();
    for (std::size_t row = 0; row < row_count; ++row) {
        ordered_json entry;
        entry["given"] = ordered_json::array();
        std::size_t rest = row;
        for (const auto& p : cpd.parent_order) {
            int ds = dbn.domain_size(p.var);
            entry["given"].push_back(dbn.domains[p.var][rest % ds]);
            rest /= ds;
        }
        entry["dist"] = ordered_json::array();
        for (const auto& q : cpd.rows[row]) entry["dist"].push_back(format_rational(q));
        spec["table"].push_back(std::move(entry));
    }
    return spec;
}

}  // namespace

std::string print_template(const DBNTemplate& tmpl, const std::vector<std::string>& propositions) {
    return template_json(tmpl, propositions).dump(2) + "\n";
}

std::string print_dbn(const DBN& dbn, const std::vector<std::string>& propositions) {
    const DBNTemplate& tmpl = dbn.tmpl;
    ordered_json doc = template_json(tmpl, {});
    ordered_json domains = ordered_json::object();
    for (int v = 0; v < tmpl.n(); ++v) {
        if (dbn.domains[v] != std::vector<std::string>{"0", "1"})
            domains[tmpl.variables[v].name] = dbn.domains[v];
    }
    if (!domains.empty()) doc["domains"] = std::move(domains);
    ordered_json cpds = ordered_json::object();
    for (int v = 0; v < tmpl.n(); ++v)
        cpds[tmpl.variables[v].name] = cpd_json(dbn, dbn.initial_cpds[v]);
    for (int v = 0; v < tmpl.n(); ++v)
        cpds[tmpl.variables[v].name + "'"] = cpd_json(dbn, dbn.step_cpds[v]);
    doc["cpds"] = std::move(cpds);
    if (!propositions.empty()) doc["propositions"] = propositions;
    return doc.dump(2) + "\n";
}

}  // namespace dbnci
