#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbnci/dsep.hpp"
#include "dbnci/errors.hpp"
#include "dbnci/generators.hpp"
#include "dbnci/ltl.hpp"
#include "dbnci/model.hpp"
#include "dbnci/nba.hpp"
#include "dbnci/repr_ts.hpp"
#include "dbnci/stochastic.hpp"
#include "dbnci/unfolding.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dbnci::ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<int> letter_bits(dbnci::Letter letter, std::size_t count) {
    std::vector<int> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (letter >> i & 1) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<std::string> prop_strings(const std::vector<dbnci::CIProposition>& props,
                                      const dbnci::DBNTemplate& tmpl) {
    std::vector<std::string> out;
    out.reserve(props.size());
    for (const auto& p : props) out.push_back(p.to_string(tmpl));
    return out;
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

struct CheckOpts {
    std::string model_path;
    std::string ltl;
    std::string ltl_file;
    std::string nba_path;
    std::size_t state_budget = dbnci::kDefaultStateBudget;
    bool json = false;
};

int do_check(const CheckOpts& opt) {
    dbnci::ModelFile model = dbnci::parse_dbn(read_file(opt.model_path));
    int sources = (opt.ltl.empty() ? 0 : 1) + (opt.ltl_file.empty() ? 0 : 1) +
                  (opt.nba_path.empty() ? 0 : 1);
    if (sources != 1)
        throw dbnci::ValidationError("give exactly one of --ltl, --ltl-file, --nba");

    dbnci::CheckResult result;
    ordered_json doc;
    doc["mode"] = "check";
    std::string described;
    if (!opt.nba_path.empty()) {
        dbnci::NBA nba = dbnci::parse_nba(read_file(opt.nba_path), model.tmpl);
        result = dbnci::check_nba(model.tmpl, nba, opt.state_budget);
        described = "automaton with " + std::to_string(nba.states.size()) + " states, " +
                    std::to_string(nba.transitions.size()) + " transitions";
        doc["automaton"] = {{"states", nba.states.size()},
                            {"transitions", nba.transitions.size()}};
    } else {
        std::string text = opt.ltl.empty() ? read_file(opt.ltl_file) : opt.ltl;
        dbnci::ParsedFormula f = dbnci::parse_ltl(text, model.tmpl);
        result = dbnci::check_ltl(model.tmpl, f, opt.state_budget);
        described = dbnci::formula_to_string(f.root, f.props.props, model.tmpl);
        doc["formula"] = described;
    }

    doc["holds"] = result.holds;
    doc["fast_path"] = result.used_restricted ? "restricted" : "general";
    doc["prefix"] = result.trace.prefix.size();
    doc["period"] = result.trace.period.size();
    doc["states_visited"] = result.trace.states_visited;
    if (result.witness)
        doc["witness"] = *result.witness;
    else
        doc["witness"] = nullptr;

    if (opt.json) {
        emit(doc);
    } else {
        std::cout << (opt.nba_path.empty() ? "formula: " : "spec: ") << described << "\n";
        std::cout << "fast path: " << (result.used_restricted ? "restricted" : "general")
                  << "\n";
        std::cout << "lasso: prefix=" << result.trace.prefix.size()
                  << " period=" << result.trace.period.size() << " ("
                  << result.trace.states_visited << " states visited)\n";
        std::cout << "result: " << (result.holds ? "holds" : "violated") << "\n";
        if (result.witness) std::cout << "witness: t=" << *result.witness << "\n";
    }
    return result.holds ? 0 : 1;
}

struct TraceOpts {
    std::string model_path;
    std::vector<std::string> props;
    int horizon = -1;
    std::size_t state_budget = dbnci::kDefaultStateBudget;
    bool oracle = false;
    int oracle_cap = dbnci::kDefaultOracleCap;
    bool json = false;
};

std::vector<dbnci::CIProposition> gather_props(const std::vector<std::string>& flags,
                                               const dbnci::ModelFile& model,
                                               dbnci::CIProposition::Kind kind) {
    const std::vector<std::string>& texts = flags.empty() ? model.propositions : flags;
    if (texts.empty())
        throw dbnci::ValidationError(
            "no propositions: pass --prop or list them in the model file");
    std::vector<dbnci::CIProposition> props;
    props.reserve(texts.size());
    for (const std::string& text : texts)
        props.push_back(dbnci::parse_proposition(text, model.tmpl, kind));
    return props;
}

int do_trace(const TraceOpts& opt) {
    dbnci::ModelFile model = dbnci::parse_dbn(read_file(opt.model_path));
    std::vector<dbnci::CIProposition> props =
        gather_props(opt.props, model, dbnci::CIProposition::Kind::structural);

    dbnci::LassoTrace trace =
        dbnci::is_restricted(model.tmpl)
            ? dbnci::restricted_trace(model.tmpl, props)
            : dbnci::find_lasso(model.tmpl, props, opt.state_budget);

    std::size_t shown = opt.horizon >= 0 ? static_cast<std::size_t>(opt.horizon) + 1
                                         : trace.positions();
    std::vector<std::string> names = prop_strings(props, model.tmpl);

    int mismatch = -1;
    if (opt.oracle) {
        std::size_t limit = std::min(shown, static_cast<std::size_t>(opt.oracle_cap) + 1);
        for (std::size_t t = 0; t < limit; ++t) {
            dbnci::Letter truth =
                dbnci::oracle_letter(model.tmpl, props, static_cast<int>(t), opt.oracle_cap);
            if (truth != trace.letter_at(t)) {
                mismatch = static_cast<int>(t);
                break;
            }
        }
    }

    if (opt.json) {
        ordered_json doc;
        doc["mode"] = "trace";
        doc["props"] = names;
        doc["fast_path"] = dbnci::is_restricted(model.tmpl) ? "restricted" : "general";
        doc["prefix"] = ordered_json::array();
        for (dbnci::Letter l : trace.prefix)
            doc["prefix"].push_back(letter_bits(l, props.size()));
        doc["period"] = ordered_json::array();
        for (dbnci::Letter l : trace.period)
            doc["period"].push_back(letter_bits(l, props.size()));
        if (opt.horizon >= 0) {
            doc["letters"] = ordered_json::array();
            for (std::size_t t = 0; t < shown; ++t)
                doc["letters"].push_back(letter_bits(trace.letter_at(t), props.size()));
        }
        doc["states_visited"] = trace.states_visited;
        if (opt.oracle) doc["oracle_mismatch"] = mismatch < 0 ? nullptr : ordered_json(mismatch);
        emit(doc);
    } else {
        std::cout << "fast path: "
                  << (dbnci::is_restricted(model.tmpl) ? "restricted" : "general") << "\n";
        for (std::size_t i = 0; i < names.size(); ++i)
            std::cout << "p" << i << ": " << names[i] << "\n";
        if (opt.horizon >= 0) {
            for (std::size_t t = 0; t < shown; ++t)
                std::cout << "t=" << t << ": "
                          << dbnci::letter_to_string(trace.letter_at(t), props, model.tmpl)
                          << "\n";
        } else {
            for (std::size_t t = 0; t < trace.positions(); ++t) {
                if (t == trace.prefix.size()) std::cout << "-- period --\n";
                std::cout << "t=" << t << ": "
                          << dbnci::letter_to_string(trace.letter_at(t), props, model.tmpl)
                          << "\n";
            }
        }
        if (opt.oracle) {
            if (mismatch < 0)
                std::cout << "oracle: agrees\n";
            else
                std::cout << "oracle: mismatch at t=" << mismatch << "\n";
        }
    }
    return mismatch < 0 ? 0 : 1;
}

struct StochasticOpts {
    std::string model_path;
    std::string ltl;
    std::string ltl_file;
    std::string prop;
    int time = -1;
    int horizon = -1;
    std::size_t max_configs = dbnci::kDefaultMaxConfigs;
    bool json = false;
};

int do_stochastic(const StochasticOpts& opt) {
    dbnci::ModelFile model = dbnci::parse_dbn(read_file(opt.model_path));
    if (!model.dbn)
        throw dbnci::ValidationError("stochastic checks need a model file with a cpds section");

    bool formula_mode = !opt.ltl.empty() || !opt.ltl_file.empty();
    if (formula_mode == !opt.prop.empty())
        throw dbnci::ValidationError("give either --ltl/--ltl-file with --horizon, or --prop with --time");

    dbnci::DbnEvaluator ev(*model.dbn, opt.max_configs);

    if (!formula_mode) {
        if (opt.time < 0) throw dbnci::ValidationError("--prop needs --time");
        dbnci::CIProposition prop = dbnci::parse_proposition(
            opt.prop, model.tmpl, dbnci::CIProposition::Kind::stochastic);
        bool holds = ev.stochastic_ci(prop, opt.time);
        if (opt.json) {
            ordered_json doc;
            doc["mode"] = "stochastic";
            doc["prop"] = prop.to_string(model.tmpl);
            doc["time"] = opt.time;
            doc["holds"] = holds;
            emit(doc);
        } else {
            std::cout << prop.to_string(model.tmpl) << " at t=" << opt.time << ": "
                      << (holds ? "holds" : "fails") << "\n";
        }
        return holds ? 0 : 1;
    }

    if (opt.horizon < 0)
        throw dbnci::ValidationError("--ltl/--ltl-file needs --horizon");
    std::string text = opt.ltl.empty() ? read_file(opt.ltl_file) : opt.ltl;
    dbnci::ParsedFormula f =
        dbnci::parse_ltl(text, model.tmpl, dbnci::CIProposition::Kind::stochastic);
    dbnci::BoundedVerdict verdict = dbnci::bounded_check(ev, f, opt.horizon);

    const char* outcome = nullptr;
    switch (verdict.outcome) {
        case dbnci::BoundedVerdict::Outcome::violated_at: outcome = "violated_at"; break;
        case dbnci::BoundedVerdict::Outcome::holds_up_to: outcome = "holds_up_to"; break;
        case dbnci::BoundedVerdict::Outcome::unknown: outcome = "unknown"; break;
    }

    if (opt.json) {
        ordered_json doc;
        doc["mode"] = "stochastic";
        doc["formula"] = dbnci::formula_to_string(f.root, f.props.props, model.tmpl);
        doc["outcome"] = outcome;
        doc["position"] = verdict.position;
        doc["horizon"] = verdict.horizon;
        doc["conclusive"] = verdict.conclusive;
        if (verdict.decided_at)
            doc["decided_at"] = *verdict.decided_at;
        else
            doc["decided_at"] = nullptr;
        emit(doc);
    } else {
        std::cout << "formula: " << dbnci::formula_to_string(f.root, f.props.props, model.tmpl)
                  << "\n";
        std::cout << "verdict: " << outcome;
        if (verdict.outcome != dbnci::BoundedVerdict::Outcome::unknown)
            std::cout << " t=" << verdict.position;
        std::cout << " (" << (verdict.conclusive ? "conclusive" : "inconclusive") << ")\n";
    }
    if (verdict.outcome == dbnci::BoundedVerdict::Outcome::violated_at) return 1;
    return verdict.conclusive ? 0 : 2;
}

struct OracleOpts {
    std::string model_path;
    std::vector<std::string> props;
    int horizon = -1;
    std::vector<int> times;
    int cap = dbnci::kDefaultOracleCap;
    bool json = false;
};

int do_oracle(const OracleOpts& opt) {
    dbnci::ModelFile model = dbnci::parse_dbn(read_file(opt.model_path));
    std::vector<dbnci::CIProposition> props =
        gather_props(opt.props, model, dbnci::CIProposition::Kind::structural);

    std::vector<int> times = opt.times;
    if (opt.horizon >= 0) {
        for (int t = 0; t <= opt.horizon; ++t) times.push_back(t);
    }
    if (times.empty())
        throw dbnci::ValidationError("give --time (repeatable) or --horizon");

    ordered_json rows = ordered_json::array();
    for (int t : times) {
        dbnci::Letter truth = dbnci::oracle_letter(model.tmpl, props, t, opt.cap);
        if (opt.json) {
            rows.push_back({{"t", t}, {"props", letter_bits(truth, props.size())}});
        } else {
            std::cout << "t=" << t << ": "
                      << dbnci::letter_to_string(truth, props, model.tmpl) << "\n";
        }
    }
    if (opt.json) {
        ordered_json doc;
        doc["mode"] = "oracle";
        doc["props"] = prop_strings(props, model.tmpl);
        doc["letters"] = rows;
        emit(doc);
    }
    return 0;
}

struct GenerateOpts {
    int primes_k = 1;
    std::string dfa_file;
    std::string chain_file;
    std::size_t skolem_size = 3;
    int skolem_terms = 3;
    std::string chain_out;
    int random_vars = 3;
    bool random_restricted = false;
    std::uint64_t seed = 1;
};

int do_generate_primes(const GenerateOpts& opt) {
    dbnci::GeneratedInstance inst = dbnci::gen_prime_bridges(opt.primes_k);
    std::cout << dbnci::print_template(inst.tmpl, {inst.prop.to_string(inst.tmpl)});
    return 0;
}

int do_generate_dfa(const GenerateOpts& opt) {
    std::vector<dbnci::UnaryDFA> dfas = dbnci::parse_dfas(read_file(opt.dfa_file));
    dbnci::GeneratedInstance inst = dbnci::gen_dfa_intersection(dfas);
    std::cout << dbnci::print_template(inst.tmpl, {inst.prop.to_string(inst.tmpl)});
    return 0;
}

int do_generate_skolem(const GenerateOpts& opt) {
    dbnci::MarkovChain chain;
    if (!opt.chain_file.empty()) {
        chain = dbnci::parse_markov_chain(read_file(opt.chain_file));
    } else {
        std::mt19937_64 rng(opt.seed);
        chain = dbnci::random_doubly_stochastic(opt.skolem_size, opt.skolem_terms, rng);
    }
    dbnci::SkolemInstance inst = dbnci::gen_skolem_embedding(chain);
    if (!opt.chain_out.empty()) {
        std::ofstream out(opt.chain_out, std::ios::binary);
        if (!out) throw dbnci::ValidationError("cannot write '" + opt.chain_out + "'");
        out << dbnci::print_markov_chain(inst.chain);
    }
    std::cout << dbnci::print_dbn(inst.dbn, {inst.prop.to_string(inst.dbn.tmpl)});
    return 0;
}

int do_generate_random(const GenerateOpts& opt) {
    std::mt19937_64 rng(opt.seed);
    dbnci::DBNTemplate tmpl =
        dbnci::random_template(opt.random_vars, rng, opt.random_restricted);
    std::cout << dbnci::print_template(tmpl);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal conditional-independence checking for dynamic network templates"};
    app.require_subcommand(1);

    CheckOpts check;
    CLI::App* check_cmd =
        app.add_subcommand("check", "Decide a temporal spec over the independence trace");
    check_cmd->add_option("model", check.model_path, "Model JSON file")->required();
    check_cmd->add_option("--ltl", check.ltl, "Formula text");
    check_cmd->add_option("--ltl-file", check.ltl_file, "File holding the formula");
    check_cmd->add_option("--nba", check.nba_path, "Buchi automaton JSON file");
    check_cmd->add_option("--state-budget", check.state_budget, "Max representative states")
        ->envname("DBNCI_STATE_BUDGET");
    check_cmd->add_flag("--json", check.json, "Machine-readable output");

    TraceOpts trace;
    CLI::App* trace_cmd =
        app.add_subcommand("trace", "Print the ultimately periodic independence trace");
    trace_cmd->add_option("model", trace.model_path, "Model JSON file")->required();
    trace_cmd->add_option("--prop", trace.props, "Proposition (repeatable)");
    trace_cmd->add_option("--horizon", trace.horizon, "Print letters up to this time");
    trace_cmd->add_option("--state-budget", trace.state_budget, "Max representative states")
        ->envname("DBNCI_STATE_BUDGET");
    trace_cmd->add_flag("--oracle", trace.oracle, "Cross-check letters against the unfolding");
    trace_cmd->add_option("--oracle-cap", trace.oracle_cap, "Deepest oracle horizon");
    trace_cmd->add_flag("--json", trace.json, "Machine-readable output");

    StochasticOpts sto;
    CLI::App* sto_cmd = app.add_subcommand(
        "stochastic", "Exact distribution-level independence over a bounded horizon");
    sto_cmd->add_option("model", sto.model_path, "Model JSON file with cpds")->required();
    sto_cmd->add_option("--ltl", sto.ltl, "Formula text");
    sto_cmd->add_option("--ltl-file", sto.ltl_file, "File holding the formula");
    sto_cmd->add_option("--prop", sto.prop, "Single proposition");
    sto_cmd->add_option("--time", sto.time, "Time step for --prop");
    sto_cmd->add_option("--horizon", sto.horizon, "Bounded horizon for --ltl");
    sto_cmd->add_option("--max-configs", sto.max_configs, "Max joint configurations");
    sto_cmd->add_flag("--json", sto.json, "Machine-readable output");

    OracleOpts oracle;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "Ground-truth letters by d-separation on the explicit unfolding");
    oracle_cmd->add_option("model", oracle.model_path, "Model JSON file")->required();
    oracle_cmd->add_option("--prop", oracle.props, "Proposition (repeatable)");
    oracle_cmd->add_option("--time", oracle.times, "Time step (repeatable)");
    oracle_cmd->add_option("--horizon", oracle.horizon, "All times up to this horizon");
    oracle_cmd->add_option("--cap", oracle.cap, "Refuse horizons beyond this");
    oracle_cmd->add_flag("--json", oracle.json, "Machine-readable output");

    GenerateOpts gen;
    CLI::App* gen_cmd = app.add_subcommand("generate", "Emit benchmark instances");
    gen_cmd->require_subcommand(1);
    CLI::App* gen_primes =
        gen_cmd->add_subcommand("primes", "Prime-cycle bridge with long period");
    gen_primes->add_option("--k", gen.primes_k, "Number of prime cycles")->required();
    CLI::App* gen_dfa =
        gen_cmd->add_subcommand("dfa", "Bridge instance from unary automata");
    gen_dfa->add_option("--file", gen.dfa_file, "Automata JSON file")->required();
    CLI::App* gen_skolem =
        gen_cmd->add_subcommand("skolem", "Embed a doubly stochastic chain");
    gen_skolem->add_option("--chain", gen.chain_file, "Chain JSON file");
    gen_skolem->add_option("--size", gen.skolem_size, "States of a sampled chain");
    gen_skolem->add_option("--terms", gen.skolem_terms, "Permutation terms of a sampled chain");
    gen_skolem->add_option("--seed", gen.seed, "Sampling seed");
    gen_skolem->add_option("--chain-out", gen.chain_out, "Also write the chain here");
    CLI::App* gen_random = gen_cmd->add_subcommand("random", "Random template");
    gen_random->add_option("--vars", gen.random_vars, "Variable count")->required();
    gen_random->add_option("--seed", gen.seed, "Sampling seed");
    gen_random->add_flag("--restricted", gen.random_restricted,
                         "Initial edges drawn from the within-slice step edges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (check_cmd->parsed()) code = do_check(check);
        else if (trace_cmd->parsed()) code = do_trace(trace);
        else if (sto_cmd->parsed()) code = do_stochastic(sto);
        else if (oracle_cmd->parsed()) code = do_oracle(oracle);
        else if (gen_primes->parsed()) code = do_generate_primes(gen);
        else if (gen_dfa->parsed()) code = do_generate_dfa(gen);
        else if (gen_skolem->parsed()) code = do_generate_skolem(gen);
        else if (gen_random->parsed()) code = do_generate_random(gen);
    } catch (const dbnci::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 4;
    } catch (const dbnci::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dbnci::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    std::cerr << "elapsed_ms=" << elapsed.count() / 1000.0 << "\n";
    return code;
}
