#pragma once

// Brute-force reference implementations the tests cross-check the library
// against: simple-path d-separation, trajectory-enumeration joints, and
// random instance sampling. Deliberately naive and kept free of the
// library's own search routines.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "dbnci/generators.hpp"
#include "dbnci/model.hpp"
#include "dbnci/rational.hpp"

namespace oracle {

struct PathRules {
    const dbnci::BNTemplate& bn;
    std::set<int> z;
    std::set<int> anc_z;  // nodes with a descendant in Z, Z included

    explicit PathRules(const dbnci::BNTemplate& bn_in, const std::vector<int>& z_in)
        : bn(bn_in), z(z_in.begin(), z_in.end()) {
        std::vector<int> stack(z_in.begin(), z_in.end());
        anc_z = z;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int p : bn.parents[static_cast<std::size_t>(v)]) {
                if (anc_z.insert(p).second) stack.push_back(p);
            }
        }
    }

    bool edge(int a, int b) const {
        for (int c : bn.children[static_cast<std::size_t>(a)]) {
            if (c == b) return true;
        }
        return false;
    }

    // Active by the textbook rule: interior colliders must have a descendant
    // in Z, interior non-colliders must avoid Z.
    bool path_active(const std::vector<int>& path) const {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            bool collider = edge(path[i - 1], path[i]) && edge(path[i + 1], path[i]);
            if (collider) {
                if (!anc_z.count(path[i])) return false;
            } else {
                if (z.count(path[i])) return false;
            }
        }
        return true;
    }

    bool trek(const std::vector<int>& path, const std::set<int>& forbidden) const {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            if (edge(path[i - 1], path[i]) && edge(path[i + 1], path[i])) return false;
            if (forbidden.count(path[i])) return false;
        }
        return true;
    }
};

template <typename Visit>
void simple_paths_from(const dbnci::BNTemplate& bn, std::vector<int>& path,
                       std::vector<bool>& used, const std::set<int>& targets,
                       const Visit& visit) {
    int v = path.back();
    if (targets.count(v) && path.size() > 1) {
        visit(path);
        return;  // interior nodes never lie in the target set for our queries
    }
    auto extend = [&](int next) {
        if (used[static_cast<std::size_t>(next)]) return;
        used[static_cast<std::size_t>(next)] = true;
        path.push_back(next);
        simple_paths_from(bn, path, used, targets, visit);
        path.pop_back();
        used[static_cast<std::size_t>(next)] = false;
    };
    for (int c : bn.children[static_cast<std::size_t>(v)]) extend(c);
    for (int p : bn.parents[static_cast<std::size_t>(v)]) extend(p);
}

inline bool dsep_by_paths(const dbnci::BNTemplate& bn, const std::vector<int>& xs,
                          const std::vector<int>& ys, const std::vector<int>& zs) {
    PathRules rules(bn, zs);
    std::set<int> targets(ys.begin(), ys.end());
    bool connected = false;
    for (int x : xs) {
        std::vector<int> path{x};
        std::vector<bool> used(bn.nodes.size(), false);
        used[static_cast<std::size_t>(x)] = true;
        simple_paths_from(bn, path, used, targets, [&](const std::vector<int>& p) {
            if (rules.path_active(p)) connected = true;
        });
        if (connected) return false;
    }
    return true;
}

inline bool trek_by_paths(const dbnci::BNTemplate& bn, int a, int b,
                          const std::vector<int>& forbidden) {
    PathRules rules(bn, {});
    std::set<int> forbid(forbidden.begin(), forbidden.end());
    std::set<int> targets{b};
    bool found = false;
    std::vector<int> path{a};
    std::vector<bool> used(bn.nodes.size(), false);
    used[static_cast<std::size_t>(a)] = true;
    simple_paths_from(bn, path, used, targets, [&](const std::vector<int>& p) {
        if (rules.trek(p, forbid)) found = true;
    });
    return found;
}

// Exact joints at every time 0..horizon by walking all configuration
// trajectories, reading CPD rows directly.
class TrajectoryJoint {
  public:
    TrajectoryJoint(const dbnci::DBN& dbn, int horizon) : dbn_(dbn) {
        configs_ = 1;
        for (int v = 0; v < dbn.tmpl.n(); ++v)
            configs_ *= static_cast<std::size_t>(dbn.domain_size(v));
        joints_.assign(static_cast<std::size_t>(horizon) + 1,
                       std::vector<dbnci::Rational>(configs_, dbnci::Rational(0)));
        for (std::size_t c = 0; c < configs_; ++c) {
            dbnci::Rational p = slice_prob(dbn.initial_cpds, {}, c);
            if (p == 0) continue;
            joints_[0][c] += p;
            walk(c, 1, horizon, p);
        }
    }

    const std::vector<dbnci::Rational>& at(int t) const {
        return joints_[static_cast<std::size_t>(t)];
    }

  private:
    std::vector<int> decode(std::size_t config) const {
        std::vector<int> vals(static_cast<std::size_t>(dbn_.tmpl.n()));
        for (int v = 0; v < dbn_.tmpl.n(); ++v) {
            vals[static_cast<std::size_t>(v)] =
                static_cast<int>(config % static_cast<std::size_t>(dbn_.domain_size(v)));
            config /= static_cast<std::size_t>(dbn_.domain_size(v));
        }
        return vals;
    }

    dbnci::Rational slice_prob(const std::vector<dbnci::CPDTable>& cpds,
                               const std::vector<int>& prev_vals, std::size_t config) const {
        std::vector<int> vals = decode(config);
        dbnci::Rational p = 1;
        for (int v = 0; v < dbn_.tmpl.n(); ++v) {
            const dbnci::CPDTable& t = cpds[static_cast<std::size_t>(v)];
            std::size_t row = 0, scale = 1;
            for (const dbnci::SliceVar& sv : t.parent_order) {
                int val = sv.primed ? vals[static_cast<std::size_t>(sv.var)]
                                    : (prev_vals.empty() ? vals[static_cast<std::size_t>(sv.var)]
                                                         : prev_vals[static_cast<std::size_t>(sv.var)]);
                row += scale * static_cast<std::size_t>(val);
                scale *= static_cast<std::size_t>(dbn_.domain_size(sv.var));
            }
            p *= t.rows[row][static_cast<std::size_t>(vals[static_cast<std::size_t>(v)])];
            if (p == 0) break;
        }
        return p;
    }

    void walk(std::size_t prev, int depth, int horizon, const dbnci::Rational& mass) {
        if (depth > horizon) return;
        std::vector<int> prev_vals = decode(prev);
        for (std::size_t c = 0; c < configs_; ++c) {
            dbnci::Rational p = slice_prob(dbn_.step_cpds, prev_vals, c);
            if (p == 0) continue;
            dbnci::Rational m = mass * p;
            joints_[static_cast<std::size_t>(depth)][c] += m;
            walk(c, depth + 1, horizon, m);
        }
    }

    const dbnci::DBN& dbn_;
    std::size_t configs_ = 0;
    std::vector<std::vector<dbnci::Rational>> joints_;
};

// Cross-multiplied CI test straight on an explicit joint.
inline bool ci_on_joint(const dbnci::DBN& dbn, const std::vector<dbnci::Rational>& joint,
                        const dbnci::CIProposition& prop) {
    auto value_of = [&](std::size_t config, int var) {
        for (int v = 0; v < var; ++v) config /= static_cast<std::size_t>(dbn.domain_size(v));
        return static_cast<int>(config % static_cast<std::size_t>(dbn.domain_size(var)));
    };
    auto key_of = [&](std::size_t config, const std::vector<int>& vars) {
        std::vector<int> key;
        for (int v : vars) key.push_back(value_of(config, v));
        return key;
    };
    std::map<std::vector<int>, dbnci::Rational> xyz, xz, yz, zm;
    auto cat = [](std::vector<int> a, const std::vector<int>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    for (std::size_t c = 0; c < joint.size(); ++c) {
        if (joint[c] == 0) continue;
        auto xv = key_of(c, prop.x), yv = key_of(c, prop.y), zv = key_of(c, prop.z);
        xyz[cat(cat(xv, yv), zv)] += joint[c];
        xz[cat(xv, zv)] += joint[c];
        yz[cat(yv, zv)] += joint[c];
        zm[zv] += joint[c];
    }
    auto get = [](const std::map<std::vector<int>, dbnci::Rational>& m,
                  const std::vector<int>& k) {
        auto it = m.find(k);
        return it == m.end() ? dbnci::Rational(0) : it->second;
    };
    // Check every combination that carries mass on either side; combinations
    // with no mass anywhere satisfy 0 = 0.
    for (const auto& [zk, pz] : zm) {
        for (const auto& [xzk, pxz] : xz) {
            if (std::vector<int>(xzk.end() - static_cast<long>(zk.size()), xzk.end()) != zk)
                continue;
            std::vector<int> xk(xzk.begin(), xzk.end() - static_cast<long>(zk.size()));
            for (const auto& [yzk, pyz] : yz) {
                if (std::vector<int>(yzk.end() - static_cast<long>(zk.size()), yzk.end()) != zk)
                    continue;
                std::vector<int> yk(yzk.begin(), yzk.end() - static_cast<long>(zk.size()));
                if (get(xyz, cat(cat(xk, yk), zk)) * pz != pxz * pyz) return false;
            }
        }
    }
    return true;
}

// ---- random instance sampling ----

inline dbnci::CIProposition random_prop(int n, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("random_prop needs two variables");
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::size_t nx = 1 + rng() % 2, ny = 1 + rng() % 2, nz = rng() % 3;
    nx = std::min(nx, vars.size() > 1 ? vars.size() - 1 : 1);
    ny = std::min(ny, vars.size() - nx > 0 ? vars.size() - nx : 1);
    nz = std::min(nz, vars.size() - nx - ny);
    dbnci::CIProposition p;
    std::size_t i = 0;
    for (std::size_t k = 0; k < nx; ++k) p.x.push_back(vars[i++]);
    for (std::size_t k = 0; k < ny; ++k) p.y.push_back(vars[i++]);
    for (std::size_t k = 0; k < nz; ++k) p.z.push_back(vars[i++]);
    p.canonicalize();
    return p;
}

inline dbnci::BNTemplate random_dag(int n, int edge_pct, std::mt19937_64& rng) {
    dbnci::BNTemplate bn;
    for (int i = 0; i < n; ++i) bn.add_node("N" + std::to_string(i));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (static_cast<int>(rng() % 100) < edge_pct)
                bn.add_edge(order[static_cast<std::size_t>(i)],
                            order[static_cast<std::size_t>(j)]);
        }
    }
    bn.finalize();
    return bn;
}

inline std::vector<dbnci::Rational> random_row(std::mt19937_64& rng) {
    if (rng() % 100 < 15) {
        bool one = rng() % 2;
        return {dbnci::Rational(one ? 0 : 1), dbnci::Rational(one ? 1 : 0)};
    }
    long a = 1 + static_cast<long>(rng() % 6), b = 1 + static_cast<long>(rng() % 6);
    return {dbnci::make_rational(a, a + b), dbnci::make_rational(b, a + b)};
}

// Binary CPDs over the template-induced parent sets, with occasional
// deterministic rows to exercise zero-mass contexts.
inline dbnci::DBN random_binary_dbn(const dbnci::DBNTemplate& tmpl, std::mt19937_64& rng) {
    dbnci::DBN dbn;
    dbn.tmpl = tmpl;
    dbn.domains.assign(static_cast<std::size_t>(tmpl.n()), {"0", "1"});
    dbn.initial_cpds.resize(static_cast<std::size_t>(tmpl.n()));
    dbn.step_cpds.resize(static_cast<std::size_t>(tmpl.n()));
    for (int v = 0; v < tmpl.n(); ++v) {
        dbnci::CPDTable init;
        init.child = {v, false};
        for (auto [a, b] : tmpl.initial_edges) {
            if (b == v) init.parent_order.push_back({a, false});
        }
        for (std::size_t r = 0; r < std::size_t{1} << init.parent_order.size(); ++r)
            init.rows.push_back(random_row(rng));
        dbn.initial_cpds[static_cast<std::size_t>(v)] = init;

        dbnci::CPDTable step;
        step.child = {v, true};
        for (const auto& [sv, b] : tmpl.step_edges) {
            if (b == v) step.parent_order.push_back(sv);
        }
        for (std::size_t r = 0; r < std::size_t{1} << step.parent_order.size(); ++r)
            step.rows.push_back(random_row(rng));
        dbn.step_cpds[static_cast<std::size_t>(v)] = step;
    }
    return dbn;
}

inline dbnci::UnaryDFA random_dfa(int max_states, std::mt19937_64& rng) {
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states));
    dbnci::UnaryDFA dfa;
    for (int i = 0; i < n; ++i) dfa.names.push_back("s" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        dfa.delta.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(n)));
    for (int i = 0; i < n; ++i) dfa.accepting.push_back(rng() % 100 < 40);
    return dfa;
}

}  // namespace oracle
