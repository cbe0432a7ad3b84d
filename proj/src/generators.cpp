#include "dbnci/generators.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

using nlohmann::json;

void add_var(DBNTemplate& tmpl, const std::string& name) {
    tmpl.variables.push_back({name, static_cast<int>(tmpl.variables.size())});
}

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ParseError(context + ": unknown key '" + it.key() + "'");
    }
}

// Matches the parser's canonical edge order so generated templates survive a
// print/parse round trip unchanged.
void normalize_edges(DBNTemplate& tmpl) {
    std::sort(tmpl.initial_edges.begin(), tmpl.initial_edges.end());
    tmpl.initial_edges.erase(
        std::unique(tmpl.initial_edges.begin(), tmpl.initial_edges.end()),
        tmpl.initial_edges.end());
    std::sort(tmpl.step_edges.begin(), tmpl.step_edges.end());
    tmpl.step_edges.erase(std::unique(tmpl.step_edges.begin(), tmpl.step_edges.end()),
                          tmpl.step_edges.end());
}

}  // namespace

std::vector<long> first_primes(int k) {
    std::vector<long> primes;
    for (long c = 2; static_cast<int>(primes.size()) < k; ++c) {
        bool prime = true;
        for (long p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

GeneratedInstance gen_prime_bridges(int k) {
    if (k < 1) throw ValidationError("prime bridge instances need k >= 1");
    std::vector<long> primes = first_primes(k);

    GeneratedInstance inst;
    DBNTemplate& tmpl = inst.tmpl;
    for (int i = 0; i <= k; ++i) add_var(tmpl, "X" + std::to_string(i));
    std::vector<std::vector<int>> wheel(static_cast<std::size_t>(k) + 1);
    for (int i = 1; i <= k; ++i) {
        for (long r = 0; r < primes[static_cast<std::size_t>(i) - 1]; ++r) {
            wheel[static_cast<std::size_t>(i)].push_back(tmpl.n());
            add_var(tmpl, "W" + std::to_string(i) + "_" + std::to_string(r));
        }
    }

    for (int i = 1; i <= k; ++i) {
        tmpl.initial_edges.push_back({i - 1, wheel[static_cast<std::size_t>(i)][0]});
        tmpl.initial_edges.push_back({i, wheel[static_cast<std::size_t>(i)][0]});
    }
    tmpl.step_edges.push_back({{0, false}, 0});
    tmpl.step_edges.push_back({{k, false}, k});
    for (int i = 1; i <= k; ++i) {
        const std::vector<int>& ring = wheel[static_cast<std::size_t>(i)];
        for (std::size_t r = 0; r < ring.size(); ++r)
            tmpl.step_edges.push_back({{ring[r], false}, ring[(r + 1) % ring.size()]});
    }
    normalize_edges(tmpl);
    validate_template(tmpl);

    inst.prop.x = {0};
    inst.prop.y = {k};
    for (int i = 1; i <= k; ++i) inst.prop.z.push_back(wheel[static_cast<std::size_t>(i)][0]);
    inst.prop.canonicalize();
    return inst;
}

bool UnaryDFA::accepts(long t) const {
    int state = 0;
    for (long i = 0; i < t; ++i) state = delta[static_cast<std::size_t>(state)];
    return accepting[static_cast<std::size_t>(state)];
}

std::vector<UnaryDFA> parse_dfas(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("dfas: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("dfas: top level must be an object");
    check_known_keys(doc, {"dfas"}, "dfas");
    if (!doc.contains("dfas") || !doc["dfas"].is_array() || doc["dfas"].empty())
        throw ParseError("dfas: expected a nonempty 'dfas' array");

    std::vector<UnaryDFA> out;
    for (std::size_t d = 0; d < doc["dfas"].size(); ++d) {
        const json& spec = doc["dfas"][d];
        std::string ctx = "dfas[" + std::to_string(d) + "]";
        if (!spec.is_object()) throw ParseError(ctx + ": expected an object");
        check_known_keys(spec, {"states", "delta", "accepting"}, ctx);
        for (const char* key : {"states", "delta", "accepting"}) {
            if (!spec.contains(key)) throw ParseError(ctx + ": missing '" + key + "'");
        }

        UnaryDFA dfa;
        std::map<std::string, int> index;
        if (!spec["states"].is_array() || spec["states"].empty())
            throw ParseError(ctx + ": 'states' must be a nonempty array");
        for (const json& s : spec["states"]) {
            if (!s.is_string()) throw ParseError(ctx + ": state names must be strings");
            std::string name = s.get<std::string>();
            if (index.count(name)) throw ValidationError(ctx + ": duplicate state '" + name + "'");
            index[name] = static_cast<int>(dfa.names.size());
            dfa.names.push_back(name);
        }

        dfa.delta.assign(dfa.names.size(), -1);
        if (!spec["delta"].is_object()) throw ParseError(ctx + ": 'delta' must be an object");
        for (auto it = spec["delta"].begin(); it != spec["delta"].end(); ++it) {
            auto from = index.find(it.key());
            if (from == index.end())
                throw ValidationError(ctx + ": delta from unknown state '" + it.key() + "'");
            if (!it.value().is_string())
                throw ParseError(ctx + ": delta targets must be state names");
            auto to = index.find(it.value().get<std::string>());
            if (to == index.end())
                throw ValidationError(ctx + ": delta to unknown state '" +
                                 it.value().get<std::string>() + "'");
            dfa.delta[static_cast<std::size_t>(from->second)] = to->second;
        }
        for (std::size_t s = 0; s < dfa.delta.size(); ++s) {
            if (dfa.delta[s] < 0)
                throw ValidationError(ctx + ": state '" + dfa.names[s] + "' has no transition");
        }

        dfa.accepting.assign(dfa.names.size(), false);
        if (!spec["accepting"].is_array())
            throw ParseError(ctx + ": 'accepting' must be an array");
        for (const json& s : spec["accepting"]) {
            if (!s.is_string()) throw ParseError(ctx + ": accepting entries must be state names");
            auto it = index.find(s.get<std::string>());
            if (it == index.end())
                throw ValidationError(ctx + ": accepting lists unknown state '" +
                                 s.get<std::string>() + "'");
            dfa.accepting[static_cast<std::size_t>(it->second)] = true;
        }
        out.push_back(std::move(dfa));
    }
    return out;
}

GeneratedInstance gen_dfa_intersection(const std::vector<UnaryDFA>& dfas) {
    if (dfas.empty()) throw ValidationError("need at least one automaton");
    int k = static_cast<int>(dfas.size());

    GeneratedInstance inst;
    DBNTemplate& tmpl = inst.tmpl;
    for (int i = 0; i <= k; ++i) add_var(tmpl, "X" + std::to_string(i));
    std::vector<std::vector<int>> states(dfas.size());
    for (std::size_t d = 0; d < dfas.size(); ++d) {
        for (const std::string& name : dfas[d].names) {
            states[d].push_back(tmpl.n());
            add_var(tmpl, "Q" + std::to_string(d + 1) + "_" + name);
        }
    }

    for (int i = 1; i <= k; ++i) {
        int entry = states[static_cast<std::size_t>(i) - 1][0];
        tmpl.initial_edges.push_back({i - 1, entry});
        tmpl.initial_edges.push_back({i, entry});
    }
    tmpl.step_edges.push_back({{0, false}, 0});
    tmpl.step_edges.push_back({{k, false}, k});
    for (std::size_t d = 0; d < dfas.size(); ++d) {
        for (std::size_t s = 0; s < dfas[d].names.size(); ++s) {
            int to = states[d][static_cast<std::size_t>(dfas[d].delta[s])];
            tmpl.step_edges.push_back({{states[d][s], false}, to});
        }
    }
    normalize_edges(tmpl);
    validate_template(tmpl);

    inst.prop.x = {0};
    inst.prop.y = {k};
    for (std::size_t d = 0; d < dfas.size(); ++d) {
        for (std::size_t s = 0; s < dfas[d].names.size(); ++s) {
            if (dfas[d].accepting[s]) inst.prop.z.push_back(states[d][s]);
        }
    }
    inst.prop.canonicalize();
    return inst;
}

namespace {

// Mass of a state distribution restricted to a partial bit assignment.
// Bits: X then Z0..Z{l-1}; state 0 is X=1,Z=0 and state 1+i is X=0,Z=i.
struct SkolemLayout {
    std::size_t m = 0;  // chain states
    int l = 0;          // Z bits

    bool state_bit(std::size_t state, int bit) const {
        if (bit == 0) return state == 0;
        std::size_t z = state == 0 ? 0 : state - 1;
        return (z >> (bit - 1)) & 1;
    }

    Rational mass(const std::vector<Rational>& dist,
                  const std::vector<std::pair<int, bool>>& constraints) const {
        Rational total = 0;
        for (std::size_t s = 0; s < m; ++s) {
            if (dist[s] == 0) continue;
            bool ok = true;
            for (auto [bit, val] : constraints) {
                if (state_bit(s, bit) != val) {
                    ok = false;
                    break;
                }
            }
            if (ok) total += dist[s];
        }
        return total;
    }

    // [P(bit=0 | constraints), P(bit=1 | constraints)] under dist, uniform
    // when the context has no mass.
    std::vector<Rational> bit_row(const std::vector<Rational>& dist, int bit,
                                  std::vector<std::pair<int, bool>> constraints) const {
        Rational denom = mass(dist, constraints);
        if (denom == 0) return {make_rational(1, 2), make_rational(1, 2)};
        constraints.push_back({bit, true});
        Rational p1 = mass(dist, constraints) / denom;
        return {1 - p1, p1};
    }
};

void require_doubly_stochastic(const MarkovChain& chain) {
    if (chain.size < 2) throw ValidationError("chain must have at least two states");
    if (chain.matrix.size() != chain.size || chain.init.size() != chain.size)
        throw ValidationError("chain dimensions are inconsistent");
    Rational init_sum = 0;
    for (const Rational& p : chain.init) {
        if (p < 0) throw ValidationError("initial distribution has a negative entry");
        init_sum += p;
    }
    if (init_sum != 1) throw ValidationError("initial distribution must sum to one");
    for (std::size_t i = 0; i < chain.size; ++i) {
        if (chain.matrix[i].size() != chain.size)
            throw ValidationError("chain dimensions are inconsistent");
        Rational row = 0, col = 0;
        for (std::size_t j = 0; j < chain.size; ++j) {
            if (chain.matrix[i][j] < 0)
                throw ValidationError("transition matrix has a negative entry");
            row += chain.matrix[i][j];
            col += chain.matrix[j][i];
        }
        if (row != 1 || col != 1)
            throw ValidationError("embedding needs a doubly stochastic matrix");
    }
}

}  // namespace

SkolemInstance gen_skolem_embedding(const MarkovChain& chain) {
    require_doubly_stochastic(chain);
    SkolemLayout layout;
    layout.m = chain.size;
    std::size_t k = chain.size - 1;
    layout.l = 1;
    while ((std::size_t{1} << layout.l) < k) ++layout.l;

    SkolemInstance inst;
    inst.chain = chain;
    DBN& dbn = inst.dbn;
    DBNTemplate& tmpl = dbn.tmpl;

    int l = layout.l;
    add_var(tmpl, "X");
    for (int j = 0; j < l; ++j) add_var(tmpl, "Z" + std::to_string(j));
    int y = l + 1;
    add_var(tmpl, "Y");
    inst.x_var = 0;
    inst.y_var = y;
    for (int j = 0; j < l; ++j) inst.z_vars.push_back(1 + j);

    // Draw order Y, X, Z{l-1}, ..., Z0 in both slices; the next state also
    // reads every previous-state bit.
    auto add_both = [&](int from, int to) {
        tmpl.initial_edges.push_back({from, to});
        tmpl.step_edges.push_back({{from, true}, to});
    };
    add_both(y, 0);
    for (int j = 0; j < l; ++j) {
        add_both(y, 1 + j);
        add_both(0, 1 + j);
        for (int h = j + 1; h < l; ++h) add_both(1 + h, 1 + j);
    }
    for (int bit = 0; bit <= l; ++bit) {
        tmpl.step_edges.push_back({{bit, false}, 0});
        for (int j = 0; j < l; ++j) tmpl.step_edges.push_back({{bit, false}, 1 + j});
    }
    normalize_edges(tmpl);
    validate_template(tmpl);

    dbn.domains.assign(static_cast<std::size_t>(tmpl.n()), {"0", "1"});

    std::vector<Rational> uniform(chain.size, Rational(1) / static_cast<long>(chain.size));
    auto branch_dist = [&](bool y_val, const std::vector<Rational>& y1_dist) {
        return y_val ? y1_dist : uniform;
    };

    // Valid previous-slice encodings step by the chain; the leftover bit
    // patterns are absorbing so the CPDs stay total.
    auto prev_state = [&](const std::vector<bool>& bits) -> long {
        bool x = bits[0];
        std::size_t z = 0;
        for (int j = 0; j < l; ++j) z |= static_cast<std::size_t>(bits[1 + j]) << j;
        if (x) return z == 0 ? 0 : -1;
        return z < k ? static_cast<long>(z) + 1 : -1;
    };

    dbn.initial_cpds.resize(static_cast<std::size_t>(tmpl.n()));
    dbn.step_cpds.resize(static_cast<std::size_t>(tmpl.n()));

    auto coin = [] {
        return std::vector<Rational>{make_rational(1, 2), make_rational(1, 2)};
    };

    {
        CPDTable t;
        t.child = {y, false};
        t.rows = {coin()};
        dbn.initial_cpds[static_cast<std::size_t>(y)] = t;
        t.child = {y, true};
        dbn.step_cpds[static_cast<std::size_t>(y)] = t;
    }

    // Bits drawn before state bit v within a slice (X first, then Z from the
    // top down); var indices double as layout bit indices.
    auto earlier_bits = [&](int v) {
        std::vector<int> out;
        if (v != 0) {
            out.push_back(0);
            for (int h = v + 1; h <= l; ++h) out.push_back(h);
        }
        return out;
    };

    // Initial slice: Y=1 draws the start state from init, Y=0 uniformly.
    for (int v = 0; v <= l; ++v) {
        CPDTable t;
        t.child = {v, false};
        std::vector<int> drawn = earlier_bits(v);
        for (int h : drawn) t.parent_order.push_back({h, false});
        t.parent_order.push_back({y, false});
        std::size_t rows = std::size_t{1} << t.parent_order.size();
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::pair<int, bool>> ctx;
            for (std::size_t p = 0; p < drawn.size(); ++p)
                ctx.push_back({drawn[p], ((r >> p) & 1) != 0});
            bool y_val = ((r >> drawn.size()) & 1) != 0;
            t.rows.push_back(layout.bit_row(branch_dist(y_val, chain.init), v, ctx));
        }
        dbn.initial_cpds[static_cast<std::size_t>(v)] = t;
    }

    // Step: Y'=1 applies the matrix column of the previous state, Y'=0
    // resamples uniformly over valid encodings.
    for (int v = 0; v <= l; ++v) {
        CPDTable t;
        t.child = {v, true};
        for (int p = 0; p <= l; ++p) t.parent_order.push_back({p, false});
        std::vector<int> drawn = earlier_bits(v);
        for (int h : drawn) t.parent_order.push_back({h, true});
        t.parent_order.push_back({y, true});
        std::size_t rows = std::size_t{1} << t.parent_order.size();
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<bool> prev_bits(static_cast<std::size_t>(l) + 1);
            for (int p = 0; p <= l; ++p)
                prev_bits[static_cast<std::size_t>(p)] = ((r >> p) & 1) != 0;
            long s = prev_state(prev_bits);
            if (s < 0) {
                bool keep = prev_bits[static_cast<std::size_t>(v)];
                t.rows.push_back({Rational(keep ? 0 : 1), Rational(keep ? 1 : 0)});
                continue;
            }
            std::vector<Rational> column(chain.size);
            for (std::size_t i = 0; i < chain.size; ++i)
                column[i] = chain.matrix[i][static_cast<std::size_t>(s)];
            std::vector<std::pair<int, bool>> ctx;
            for (std::size_t p = 0; p < drawn.size(); ++p)
                ctx.push_back({drawn[p], ((r >> (l + 1 + p)) & 1) != 0});
            bool y_val = ((r >> (static_cast<std::size_t>(l) + 1 + drawn.size())) & 1) != 0;
            t.rows.push_back(layout.bit_row(branch_dist(y_val, column), v, ctx));
        }
        dbn.step_cpds[static_cast<std::size_t>(v)] = t;
    }

    validate_dbn(dbn);
    inst.prop.x = {0};
    inst.prop.y = {y};
    inst.prop.kind = CIProposition::Kind::stochastic;
    inst.prop.canonicalize();
    return inst;
}

Rational skolem_difference(const SkolemInstance& inst, const DbnEvaluator& ev, int n) {
    const RationalDistribution& dist = ev.distribution_at(n);
    Rational joint[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t c = 0; c < dist.values.size(); ++c) {
        bool x = (c >> inst.x_var) & 1;
        bool y_val = (c >> inst.y_var) & 1;
        joint[x ? 1 : 0][y_val ? 1 : 0] += dist.values[c];
    }
    Rational y1 = joint[0][1] + joint[1][1];
    Rational y0 = joint[0][0] + joint[1][0];
    if (y1 == 0 || y0 == 0) throw ValidationError("coin marginal collapsed");
    return joint[1][1] / y1 - joint[1][0] / y0;
}

Rational skolem_closed_form(const MarkovChain& chain, int n) {
    std::vector<Rational> w = chain.init;
    for (int step = 0; step < n; ++step) {
        std::vector<Rational> next(chain.size, Rational(0));
        for (std::size_t j = 0; j < chain.size; ++j) {
            if (w[j] == 0) continue;
            for (std::size_t i = 0; i < chain.size; ++i)
                next[i] += chain.matrix[i][j] * w[j];
        }
        w = std::move(next);
    }
    Rational scale = 1;
    for (int step = 0; step < n; ++step) scale /= 2;
    return scale * (w[0] - Rational(1) / static_cast<long>(chain.size));
}

DBNTemplate random_template(int n_vars, std::mt19937_64& rng, bool restricted) {
    if (n_vars < 1) throw ValidationError("need at least one variable");
    DBNTemplate tmpl;
    for (int i = 0; i < n_vars; ++i) add_var(tmpl, "V" + std::to_string(i));

    auto chance = [&](int percent) { return static_cast<int>(rng() % 100) < percent; };
    std::vector<int> order(static_cast<std::size_t>(n_vars));
    for (int i = 0; i < n_vars; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::pair<int, int>> intra;
    for (int i = 0; i < n_vars; ++i) {
        for (int j = i + 1; j < n_vars; ++j) {
            if (chance(35))
                intra.push_back({order[static_cast<std::size_t>(i)],
                                 order[static_cast<std::size_t>(j)]});
        }
    }
    for (auto [a, b] : intra) tmpl.step_edges.push_back({{a, true}, b});
    for (int a = 0; a < n_vars; ++a) {
        for (int b = 0; b < n_vars; ++b) {
            if (chance(30)) tmpl.step_edges.push_back({{a, false}, b});
        }
    }

    if (restricted) {
        for (auto [a, b] : intra) {
            if (chance(70)) tmpl.initial_edges.push_back({a, b});
        }
    } else {
        std::shuffle(order.begin(), order.end(), rng);
        for (int i = 0; i < n_vars; ++i) {
            for (int j = i + 1; j < n_vars; ++j) {
                if (chance(35))
                    tmpl.initial_edges.push_back({order[static_cast<std::size_t>(i)],
                                                  order[static_cast<std::size_t>(j)]});
            }
        }
    }
    normalize_edges(tmpl);
    validate_template(tmpl);
    return tmpl;
}

MarkovChain random_doubly_stochastic(std::size_t size, int terms, std::mt19937_64& rng) {
    if (size < 1 || terms < 1) throw ValidationError("need a positive size and term count");
    MarkovChain chain;
    chain.size = size;
    chain.matrix.assign(size, std::vector<Rational>(size, Rational(0)));

    long denom = 0;
    std::vector<long> weights(static_cast<std::size_t>(terms));
    for (long& w : weights) {
        w = 1 + static_cast<long>(rng() % 9);
        denom += w;
    }
    std::vector<std::size_t> perm(size);
    for (std::size_t i = 0; i < size; ++i) perm[i] = i;
    for (long w : weights) {
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t j = 0; j < size; ++j)
            chain.matrix[perm[j]][j] += make_rational(w, denom);
    }

    std::vector<long> mass(size);
    long total = 0;
    for (long& m : mass) {
        m = 1 + static_cast<long>(rng() % 9);
        total += m;
    }
    chain.init.resize(size);
    for (std::size_t i = 0; i < size; ++i) chain.init[i] = make_rational(mass[i], total);
    return chain;
}

}  // namespace dbnci
