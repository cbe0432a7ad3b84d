#include "dbnci/nba.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

using nlohmann::json;

int state_index(const std::vector<std::string>& states, const std::string& name,
                const std::string& context) {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end())
        throw ValidationError("automaton: unknown state '" + name + "' in " + context);
    return static_cast<int>(it - states.begin());
}

}  // namespace

NBA parse_nba(const std::string& json_text, const DBNTemplate& tmpl) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("automaton: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("automaton: top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key != "states" && key != "initial" && key != "accepting" && key != "transitions")
            throw ParseError("automaton: unknown key '" + key + "'");
    }
    for (const char* key : {"states", "initial", "accepting", "transitions"})
        if (!doc.contains(key) || !doc[key].is_array())
            throw ParseError(std::string("automaton: missing '") + key + "' array");

    NBA nba;
    for (const auto& s : doc["states"]) {
        if (!s.is_string()) throw ParseError("automaton: states must be strings");
        nba.states.push_back(s.get<std::string>());
    }
    std::sort(nba.states.begin(), nba.states.end());
    if (std::adjacent_find(nba.states.begin(), nba.states.end()) != nba.states.end())
        throw ValidationError("automaton: duplicate state name");
    // Re-read in file order now that uniqueness is known.
    nba.states.clear();
    for (const auto& s : doc["states"]) nba.states.push_back(s.get<std::string>());

    for (const auto& s : doc["initial"])
        nba.initial.push_back(state_index(nba.states, s.get<std::string>(), "'initial'"));
    for (const auto& s : doc["accepting"])
        nba.accepting.push_back(state_index(nba.states, s.get<std::string>(), "'accepting'"));
    std::sort(nba.initial.begin(), nba.initial.end());
    nba.initial.erase(std::unique(nba.initial.begin(), nba.initial.end()), nba.initial.end());
    std::sort(nba.accepting.begin(), nba.accepting.end());
    nba.accepting.erase(std::unique(nba.accepting.begin(), nba.accepting.end()),
                        nba.accepting.end());

    for (const auto& t : doc["transitions"]) {
        if (!t.is_object() || !t.contains("from") || !t.contains("guard") || !t.contains("to"))
            throw ParseError("automaton: transitions need 'from', 'guard', 'to'");
        NBA::Transition tr;
        tr.from = state_index(nba.states, t["from"].get<std::string>(), "a transition");
        tr.to = state_index(nba.states, t["to"].get<std::string>(), "a transition");
        tr.guard_text = t["guard"].get<std::string>();
        ParsedFormula guard = parse_ltl(tr.guard_text, tmpl);
        if (!is_propositional(guard.root))
            throw ValidationError("automaton: guard '" + tr.guard_text +
                                  "' uses a temporal operator; guards are letter predicates");
        // Remap the guard's atoms into the automaton-wide registry.
        std::vector<int> remap(guard.props.props.size());
        for (std::size_t i = 0; i < guard.props.props.size(); ++i)
            remap[i] = nba.props.intern(guard.props.props[i]);
        struct Rewriter {
            const std::vector<int>& remap;
            FormulaPtr operator()(const FormulaPtr& f) const {
                using Op = Formula::Op;
                switch (f->op) {
                    case Op::atom: return f_atom(remap[static_cast<std::size_t>(f->atom_index)]);
                    case Op::lnot: return f_not((*this)(f->lhs));
                    case Op::land: return f_and((*this)(f->lhs), (*this)(f->rhs));
                    case Op::lor: return f_or((*this)(f->lhs), (*this)(f->rhs));
                    case Op::implies: return f_implies((*this)(f->lhs), (*this)(f->rhs));
                    default: return f;
                }
            }
        };
        tr.guard = Rewriter{remap}(guard.root);
        nba.transitions.push_back(std::move(tr));
    }
    return nba;
}

namespace {

// Iterative Tarjan over the product graph; nodes are (automaton state, lasso
// position) pairs discovered from the initial set.
struct Product {
    std::vector<std::vector<int>> succ;
    std::vector<int> auto_state;

    bool has_accepting_cycle(const std::vector<char>& accepting) const {
        const int n = static_cast<int>(succ.size());
        std::vector<int> index(n, -1), low(n, 0);
        std::vector<char> on_stack(n, 0);
        std::vector<int> stack;
        int counter = 0;

        struct Frame {
            int v;
            std::size_t child;
        };
        for (int root = 0; root < n; ++root) {
            if (index[root] != -1) continue;
            std::vector<Frame> frames{{root, 0}};
            index[root] = low[root] = counter++;
            stack.push_back(root);
            on_stack[root] = 1;
            while (!frames.empty()) {
                Frame& fr = frames.back();
                if (fr.child < succ[fr.v].size()) {
                    int w = succ[fr.v][fr.child++];
                    if (index[w] == -1) {
                        index[w] = low[w] = counter++;
                        stack.push_back(w);
                        on_stack[w] = 1;
                        frames.push_back({w, 0});
                    } else if (on_stack[w]) {
                        low[fr.v] = std::min(low[fr.v], index[w]);
                    }
                } else {
                    int v = fr.v;
                    frames.pop_back();
                    if (!frames.empty())
                        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                    if (low[v] == index[v]) {
                        // Pop one SCC; it carries a cycle iff it has more
                        // than one node or a self-loop.
                        std::vector<int> comp;
                        for (;;) {
                            int w = stack.back();
                            stack.pop_back();
                            on_stack[w] = 0;
                            comp.push_back(w);
                            if (w == v) break;
                        }
                        bool cycle = comp.size() > 1;
                        if (!cycle)
                            for (int w : succ[comp[0]])
                                if (w == comp[0]) cycle = true;
                        if (!cycle) continue;
                        for (int w : comp)
                            if (accepting[auto_state[w]]) return true;
                    }
                }
            }
        }
        return false;
    }
};

}  // namespace

bool accepts_lasso(const NBA& nba, const LassoTrace& tr) {
    if (tr.period.empty()) throw ValidationError("lasso has an empty period");
    const std::size_t positions = tr.positions();
    const std::size_t p = tr.prefix.size();

    auto letter = [&](std::size_t pos) {
        return pos < p ? tr.prefix[pos] : tr.period[pos - p];
    };
    auto next = [&](std::size_t pos) { return pos + 1 < positions ? pos + 1 : p; };

    std::vector<std::vector<int>> by_source(nba.states.size());
    for (std::size_t i = 0; i < nba.transitions.size(); ++i)
        by_source[static_cast<std::size_t>(nba.transitions[i].from)].push_back(
            static_cast<int>(i));

    // Discover the reachable product nodes breadth-first.
    std::map<std::pair<int, std::size_t>, int> id;
    Product product;
    std::deque<std::pair<int, std::size_t>> work;
    auto lookup = [&](int q, std::size_t pos) {
        auto [it, inserted] = id.emplace(std::make_pair(q, pos), static_cast<int>(id.size()));
        if (inserted) {
            product.succ.emplace_back();
            product.auto_state.push_back(q);
            work.emplace_back(q, pos);
        }
        return it->second;
    };
    for (int q : nba.initial) lookup(q, 0);
    while (!work.empty()) {
        auto [q, pos] = work.front();
        work.pop_front();
        int from = id.at({q, pos});
        for (int ti : by_source[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (!eval_letter(t.guard, letter(pos))) continue;
            int to = lookup(t.to, next(pos));  // may grow product.succ
            product.succ[static_cast<std::size_t>(from)].push_back(to);
        }
    }

    std::vector<char> accepting(nba.states.size(), 0);
    for (int q : nba.accepting) accepting[static_cast<std::size_t>(q)] = 1;
    return product.has_accepting_cycle(accepting);
}

CheckResult check_nba(const DBNTemplate& tmpl, const NBA& nba, std::size_t state_budget) {
    CheckResult result;
    result.used_restricted = is_restricted(tmpl);
    result.trace = result.used_restricted ? restricted_trace(tmpl, nba.props.props)
                                          : find_lasso(tmpl, nba.props.props, state_budget);
    result.holds = accepts_lasso(nba, result.trace);
    return result;
}

}  // namespace dbnci
