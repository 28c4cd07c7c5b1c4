#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "app.hpp"
#include "nlslab/grid.hpp"

using namespace nlslab::app;

namespace {

int fail(int code, const std::string& type, const std::string& message) {
    json err = {{"error", {{"code", code}, {"type", type}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
    return code;
}

std::string flag_name(const std::string& key) {
    std::string s = key;
    for (auto& c : s)
        if (c == '_') c = '-';
    return "--" + s;
}

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_path;
    bool print_config = false;
    std::map<std::string, std::string> raw;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
};

json collect_flags(Subcommand& sc, const json& defaults) {
    json out = json::object();
    for (const auto& [key, opt] : sc.options) {
        if (opt->count() == 0) continue;
        const json& def = defaults.at(key);
        if (def.is_boolean()) {
            out[key] = sc.flags.at(key);
            continue;
        }
        const std::string& v = sc.raw.at(key);
        try {
            if (def.is_number_integer())
                out[key] = std::stoll(v);
            else if (def.is_number())
                out[key] = std::stod(v);
            else
                out[key] = v;
        } catch (const std::exception&) {
            throw AppError(kConfigError, "invalid value for " + flag_name(key) + ": " + v);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for nonlinear Schroedinger ill-posedness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::map<std::string, Subcommand> subs;
    const std::map<std::string, std::string> help = {
        {"inflate", "Norm-inflation sweep over dyadic N"},
        {"wnlgo-error", "Geometric-optics approximation error against split-step"},
        {"loss-reg", "Loss-of-regularity scaling experiment"},
        {"resonance", "Enumerate resonant tuples"},
        {"norm", "Evaluate a norm of a stored field"},
    };
    for (const auto& [name, text] : help) {
        Subcommand& sc = subs[name];
        sc.app = app.add_subcommand(name, text);
        sc.app->add_option("--config", sc.config_path, "JSON config file (flags take precedence)");
        sc.app->add_flag("--print-config", sc.print_config, "Print the effective config and exit");
        const json defaults = default_config(name);
        for (const auto& [key, def] : defaults.items()) {
            if (def.is_boolean()) {
                sc.flags[key] = def.get<bool>();
                sc.options[key] = sc.app->add_flag(flag_name(key) + ",!--no-" + flag_name(key).substr(2), sc.flags[key]);
            } else {
                sc.options[key] = sc.app->add_option(flag_name(key), sc.raw[key], "default: " + def.dump());
            }
        }
    }
    SelfcheckOptions sopt;
    std::string selfcheck_out;
    auto* self = app.add_subcommand("selfcheck", "Fast invariant suite");
    self->add_option("--out", selfcheck_out, "Write the JSON report here");
    self->add_option("--inject", sopt.inject, "Fault injection fixture")->check(CLI::IsMember({"partition", "transform"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kConfigError, "usage", e.what());
    }

    try {
        if (self->parsed()) {
            json report = selfcheck(sopt);
            std::string text = report.dump(2) + "\n";
            if (!selfcheck_out.empty())
                write_atomic(selfcheck_out, text);
            else
                std::cout << text;
            return report.at("pass").get<bool>() ? kOk : kInvariantFailure;
        }
        for (auto& [name, sc] : subs) {
            if (!sc.app->parsed()) continue;
            json file = nullptr;
            if (!sc.config_path.empty()) {
                std::ifstream is(sc.config_path);
                if (!is) throw AppError(kConfigError, "cannot read config " + sc.config_path);
                try {
                    file = json::parse(is);
                } catch (const json::exception& e) {
                    throw AppError(kConfigError, std::string("config is not valid JSON: ") + e.what());
                }
            }
            json cfg = merge_config(name, file, collect_flags(sc, default_config(name)));
            if (sc.print_config) {
                validate_config(name, cfg);
                std::cout << cfg.dump(2) << "\n";
                return kOk;
            }
            return run_experiment(name, cfg);
        }
    } catch (const AppError& e) {
        return fail(e.code, e.code == kBudgetExceeded ? "budget" : "config", e.what());
    } catch (const nlslab::GridError& e) {
        return fail(kBudgetExceeded, "budget", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kConfigError, "config", e.what());
    } catch (const std::exception& e) {
        return fail(kInvariantFailure, "runtime", e.what());
    }
    return kOk;
}
