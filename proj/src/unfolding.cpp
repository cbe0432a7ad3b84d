#include "dbnci/unfolding.hpp"

#include <algorithm>

#include <json.hpp>

#include "dbnci/dsep.hpp"
#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

}  // namespace

BNTemplate unfold(const DBNTemplate& tmpl, int horizon) {
    if (horizon < 0) throw ValidationError("unfold: horizon must be non-negative");
    const int n = tmpl.n();
    BNTemplate bn;
    for (int s = 0; s <= horizon; ++s)
        for (int v = 0; v < n; ++v)
            bn.add_node(tmpl.variables[v].name + "@" + std::to_string(s));
    for (const auto& [u, v] : tmpl.initial_edges) bn.add_edge(u, v);
    const auto intra = tmpl.intra_step_edges();
    const auto cross = tmpl.cross_step_edges();
    for (int s = 1; s <= horizon; ++s) {
        for (const auto& [u, v] : intra) bn.add_edge(s * n + u, s * n + v);
        for (const auto& [u, v] : cross) bn.add_edge((s - 1) * n + u, s * n + v);
    }
    bn.finalize();
    return bn;
}

Letter oracle_letter(const DBNTemplate& tmpl, const std::vector<CIProposition>& props, int time,
                     int horizon_cap) {
    if (time < 0) throw ValidationError("oracle_letter: time must be non-negative");
    if (time > horizon_cap)
        throw BudgetError("oracle_letter: time " + std::to_string(time) +
                              " exceeds the horizon cap " + std::to_string(horizon_cap) +
                              " (raise the cap to go deeper)",
                          static_cast<std::size_t>(time));
    if (props.size() > kMaxProps)
        throw ValidationError("at most 64 propositions per trace are supported");

    const int n = tmpl.n();
    BNTemplate bn = unfold(tmpl, time);
    Letter letter = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        DSepQuery q;
        for (int v : props[i].x) q.x.push_back(time * n + v);
        for (int v : props[i].y) q.y.push_back(time * n + v);
        for (int v : props[i].z) q.z.push_back(time * n + v);
        if (d_separated(bn, q)) letter |= Letter{1} << i;
    }
    return letter;
}

// --- configuration indexing ------------------------------------------------

namespace {

std::size_t config_count(const DBN& dbn, std::size_t max_states) {
    std::size_t count = 1;
    for (int v = 0; v < dbn.tmpl.n(); ++v) {
        std::size_t ds = static_cast<std::size_t>(dbn.domain_size(v));
        if (count > max_states / ds)
            throw BudgetError("configuration space exceeds the limit of " +
                                  std::to_string(max_states) + " states",
                              max_states);
        count *= ds;
    }
    return count;
}

int config_value(const DBN& dbn, std::size_t config, int var) {
    for (int v = 0; v < var; ++v) config /= static_cast<std::size_t>(dbn.domain_size(v));
    return static_cast<int>(config % static_cast<std::size_t>(dbn.domain_size(var)));
}

std::size_t cpd_row_index(const DBN& dbn, const CPDTable& cpd, std::size_t prev_config,
                          std::size_t next_config) {
    std::size_t row = 0, stride = 1;
    for (const auto& p : cpd.parent_order) {
        std::size_t val = static_cast<std::size_t>(
            config_value(dbn, p.primed ? next_config : prev_config, p.var));
        row += val * stride;
        stride *= static_cast<std::size_t>(dbn.domain_size(p.var));
    }
    return row;
}

void validate_chain(const MarkovChain& chain) {
    if (chain.matrix.size() != chain.size || chain.init.size() != chain.size)
        throw ValidationError("markov chain: matrix/init dimensions disagree with size");
    for (const auto& row : chain.matrix)
        if (row.size() != chain.size)
            throw ValidationError("markov chain: matrix is not square");
    for (std::size_t j = 0; j < chain.size; ++j) {
        Rational col_sum = 0;
        for (std::size_t i = 0; i < chain.size; ++i) {
            if (sgn(chain.matrix[i][j]) < 0)
                throw ValidationError("markov chain: negative entry at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            col_sum += chain.matrix[i][j];
        }
        if (col_sum != 1)
            throw ValidationError("markov chain: column " + std::to_string(j) + " sums to " +
                                  format_rational(col_sum) + ", not 1");
    }
    Rational init_sum = 0;
    for (const auto& q : chain.init) {
        if (sgn(q) < 0) throw ValidationError("markov chain: negative initial probability");
        init_sum += q;
    }
    if (init_sum != 1)
        throw ValidationError("markov chain: initial distribution sums to " +
                              format_rational(init_sum) + ", not 1");
}

}  // namespace

MarkovChain dbn_to_markov_chain(const DBN& dbn, std::size_t max_states) {
    const std::size_t count = config_count(dbn, max_states);
    const int n = dbn.tmpl.n();

    MarkovChain chain;
    chain.size = count;
    chain.matrix.assign(count, std::vector<Rational>(count, Rational(0)));
    chain.init.assign(count, Rational(0));

    for (std::size_t c = 0; c < count; ++c) {
        Rational p = 1;
        for (int v = 0; v < n && sgn(p) != 0; ++v) {
            const CPDTable& cpd = dbn.initial_cpds[v];
            p *= cpd.rows[cpd_row_index(dbn, cpd, c, c)][config_value(dbn, c, v)];
        }
        chain.init[c] = p;
    }
    for (std::size_t prev = 0; prev < count; ++prev) {
        for (std::size_t next = 0; next < count; ++next) {
            Rational p = 1;
            for (int v = 0; v < n && sgn(p) != 0; ++v) {
                const CPDTable& cpd = dbn.step_cpds[v];
                p *= cpd.rows[cpd_row_index(dbn, cpd, prev, next)][config_value(dbn, next, v)];
            }
            chain.matrix[next][prev] = p;
        }
    }
    return chain;
}

DBN markov_chain_to_dbn(const MarkovChain& chain) {
    validate_chain(chain);
    if (chain.size == 0) throw ValidationError("markov chain: size must be positive");

    int bits = 1;
    while ((std::size_t{1} << bits) < chain.size) ++bits;
    const std::size_t padded = std::size_t{1} << bits;

    // Padding states are absorbing so the extra mass never moves.
    auto column = [&](std::size_t prev, std::size_t next) -> Rational {
        if (prev >= chain.size) return prev == next ? Rational(1) : Rational(0);
        if (next >= chain.size) return Rational(0);
        return chain.matrix[next][prev];
    };
    auto init_at = [&](std::size_t c) -> Rational {
        return c < chain.size ? chain.init[c] : Rational(0);
    };

    DBN dbn;
    for (int j = 0; j < bits; ++j)
        dbn.tmpl.variables.push_back(VariableId{"X" + std::to_string(j), j});
    dbn.domains.assign(bits, {"0", "1"});
    for (int j = 0; j < bits; ++j)
        for (int i = j + 1; i < bits; ++i) {
            dbn.tmpl.initial_edges.emplace_back(i, j);
            dbn.tmpl.step_edges.emplace_back(SliceVar{i, true}, j);
        }
    for (int i = 0; i < bits; ++i)
        for (int j = 0; j < bits; ++j)
            dbn.tmpl.step_edges.emplace_back(SliceVar{i, false}, j);
    std::sort(dbn.tmpl.initial_edges.begin(), dbn.tmpl.initial_edges.end());
    std::sort(dbn.tmpl.step_edges.begin(), dbn.tmpl.step_edges.end());

    // Bit j is drawn after the higher-order bits: its conditional splits the
    // mass of the matching state block.
    auto bit_conditional = [&](auto&& weight, int j, std::size_t high) {
        Rational zero_mass = 0, one_mass = 0;
        const std::size_t block = std::size_t{1} << j;
        for (std::size_t low = 0; low < block; ++low) {
            zero_mass += weight((high << (j + 1)) | low);
            one_mass += weight((high << (j + 1)) | block | low);
        }
        Rational total = zero_mass + one_mass;
        if (sgn(total) == 0) return std::vector<Rational>{make_rational(1, 2), make_rational(1, 2)};
        return std::vector<Rational>{zero_mass / total, one_mass / total};
    };

    dbn.initial_cpds.assign(bits, {});
    dbn.step_cpds.assign(bits, {});
    for (int j = 0; j < bits; ++j) {
        CPDTable init_cpd;
        init_cpd.child = SliceVar{j, false};
        for (int i = j + 1; i < bits; ++i) init_cpd.parent_order.push_back(SliceVar{i, false});
        const std::size_t highs = padded >> (j + 1);
        for (std::size_t high = 0; high < highs; ++high)
            init_cpd.rows.push_back(bit_conditional(init_at, j, high));
        dbn.initial_cpds[j] = std::move(init_cpd);

        CPDTable step_cpd;
        step_cpd.child = SliceVar{j, true};
        for (int i = 0; i < bits; ++i) step_cpd.parent_order.push_back(SliceVar{i, false});
        for (int i = j + 1; i < bits; ++i) step_cpd.parent_order.push_back(SliceVar{i, true});
        // parent_order starts with the previous configuration (least
        // significant in the row index), then the higher new bits.
        step_cpd.rows.reserve(padded * highs);
        for (std::size_t row = 0; row < padded * highs; ++row) {
            const std::size_t prev = row % padded;
            const std::size_t high = row / padded;
            step_cpd.rows.push_back(
                bit_conditional([&](std::size_t s) { return column(prev, s); }, j, high));
        }
        dbn.step_cpds[j] = std::move(step_cpd);
    }
    return dbn;
}

MarkovChain parse_markov_chain(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("markov chain: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("size") || !doc.contains("matrix") ||
        !doc.contains("init"))
        throw ParseError("markov chain: expected an object with 'size', 'matrix', 'init'");
    if (!doc["size"].is_number_unsigned() && !doc["size"].is_number_integer())
        throw ParseError("markov chain: 'size' must be an integer");

    MarkovChain chain;
    long long size = doc["size"].get<long long>();
    if (size <= 0) throw ValidationError("markov chain: size must be positive");
    chain.size = static_cast<std::size_t>(size);
    if (!doc["matrix"].is_array() || !doc["init"].is_array())
        throw ParseError("markov chain: 'matrix' and 'init' must be arrays");
    for (const auto& row : doc["matrix"]) {
        if (!row.is_array()) throw ParseError("markov chain: matrix rows must be arrays");
        std::vector<Rational> r;
        for (const auto& q : row) r.push_back([&] {
            if (q.is_string()) return parse_rational(q.get<std::string>());
            if (q.is_number_integer()) return make_rational(q.get<long long>());
            if (q.is_number_unsigned())
                return make_rational(static_cast<long>(q.get<unsigned long long>()));
            throw ParseError("markov chain: entries must be rational strings or integers");
        }());
        chain.matrix.push_back(std::move(r));
    }
    for (const auto& q : doc["init"]) {
        if (q.is_string())
            chain.init.push_back(parse_rational(q.get<std::string>()));
        else if (q.is_number_integer())
            chain.init.push_back(make_rational(q.get<long long>()));
        else if (q.is_number_unsigned())
            chain.init.push_back(make_rational(static_cast<long>(q.get<unsigned long long>())));
        else
            throw ParseError("markov chain: entries must be rational strings or integers");
    }
    validate_chain(chain);
    return chain;
}

std::string print_markov_chain(const MarkovChain& chain) {
    ordered_json doc;
    doc["size"] = chain.size;
    doc["matrix"] = ordered_json::array();
    for (const auto& row : chain.matrix) {
        ordered_json r = ordered_json::array();
        for (const auto& q : row) r.push_back(format_rational(q));
        doc["matrix"].push_back(std::move(r));
    }
    doc["init"] = ordered_json::array();
    for (const auto& q : chain.init) doc["init"].push_back(format_rational(q));
    return doc.dump(2) + "\n";
}

}  // namespace dbnci
