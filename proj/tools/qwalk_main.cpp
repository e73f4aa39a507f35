#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/cli_support.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Random-walk, potential-theory and Martin-boundary computations on the "
                 "discrete dual of quantum SU(2)"};
    app.require_subcommand(1);

    qwalk::RunConfig config;
    std::string window_spec;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--q", config.q, "deformation parameter in (0,1)");
        cmd->add_option("--phi", config.phi_spec, "weight map, e.g. 1:0.5,2:0.5");
        cmd->add_option("--tol-tail", config.tol_tail, "certified truncation tolerance");
        cmd->add_option("--tol-assert", config.tol_assert, "identity-check tolerance");
        cmd->add_option("--format", config.format, "output format: csv|json");
        cmd->add_option("--seed", config.seed, "seed for randomized property checks");
        return cmd;
    };

    auto* green = add_shared(app.add_subcommand("green", "certified central Green table"));
    green->add_option("--target", config.target2, "target twice-spin");
    green->add_option("--s-max", config.s_max2, "largest reported twice-spin");

    add_shared(app.add_subcommand("delta", "renewal tilt and drift (rows: 0 = delta, 1 = drift)"));

    auto* ratio = add_shared(app.add_subcommand("ratio", "Green ratio/constant asymptotics"));
    ratio->add_option("--s-max", config.s_max2, "largest reported twice-spin");

    auto* mc = add_shared(app.add_subcommand("martin-central", "central Martin kernel rows"));
    mc->add_option("--target", config.target2, "target twice-spin");
    mc->add_option("--s-max", config.s_max2, "largest reported twice-spin");

    auto* mb = add_shared(
        app.add_subcommand("martin-block", "blockwise boundary deviation report"));
    mb->add_option("--n", config.n, "power of the generator in the Fourier image");
    mb->add_option("--r-max", config.r_max2, "largest reported block twice-spin");

    auto* podles = add_shared(app.add_subcommand("podles", "sphere-relation residuals per block"));
    podles->add_option("--s-max", config.s_max2, "largest block twice-spin");

    auto* bal = add_shared(app.add_subcommand("balayage", "reduced element over a window"));
    bal->add_option("--Y", window_spec, "window labels as comma-separated twice-spins");
    bal->add_option("--s-max", config.s_max2, "element cutoff twice-spin");
    bal->add_option("--x", config.balayage_input, "input element: one|green");

    auto* zt = add_shared(app.add_subcommand("zerotwo", "0-2-law norm lower bounds"));
    zt->add_option("--n", config.n, "largest power index");
    zt->add_option("--k", config.k, "power shift");
    zt->add_option("--s-max", config.s_max2, "sup truncation twice-spin");

    auto* verify = add_shared(app.add_subcommand("verify", "run invariant suites"));
    verify->add_option("--suite", config.suite, "fusion|central|block|martin|cli|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    if (!window_spec.empty()) {
        std::size_t start = 0;
        while (start <= window_spec.size()) {
            const std::size_t pos = window_spec.find(',', start);
            const std::string tok = window_spec.substr(start, pos - start);
            try {
                config.window.push_back(std::stoi(tok));
            } catch (...) {
                std::cerr << "error: malformed window label '" << tok << "'\n";
                return 2;
            }
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }

    return qwalk::run_command(config, std::cout, std::cerr);
}
