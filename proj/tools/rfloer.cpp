#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "acceptance_suite.hpp"
#include "rfloer/fullrfh.hpp"
#include "rfloer/report.hpp"
#include "rfloer/rfh.hpp"

using namespace rfloer;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr long kTruncationCap = 64;

struct RunConfig {
    std::string model = "cp:2";
    long m = 1;
    std::string tau = "1";
    std::string degrees = "-8..8";
    std::string window = "-inf..inf";
    std::string coeff = "z";
    std::string format = "md";
    long truncation = 0;  // 0 = automatic
};

struct Parsed {
    BaseModel model;
    Rat tau;
    DegreeRange degrees;
    Window window;
    Coefficients coeff;
};

DegreeRange parse_degrees(const std::string& s) {
    static const std::regex re(R"(^\s*([+-]?\d+)\s*\.\.\s*([+-]?\d+)\s*$)");
    std::smatch mt;
    if (!std::regex_match(s, mt, re)) throw Error(ErrorKind::ParseError, "degrees must look like lo..hi, got '" + s + "'");
    DegreeRange r{std::stol(mt[1].str()), std::stol(mt[2].str())};
    if (r.lo > r.hi) throw Error(ErrorKind::ParseError, "empty degree range '" + s + "'");
    return r;
}

Parsed parse(const RunConfig& c) {
    Parsed p;
    p.model = parse_model(c.model);
    if (c.m < 1) throw Error(ErrorKind::InvalidModel, "--m must be a positive integer");
    p.tau = parse_rational(c.tau);
    if (sgn(p.tau) <= 0) throw Error(ErrorKind::NonPositiveTau, "--tau must be positive");
    p.degrees = parse_degrees(c.degrees);
    p.window = parse_window(c.window);
    p.coeff = Coefficients::parse(c.coeff);
    return p;
}

json header(const RunConfig& c, const std::string& command) {
    return {{"command", command}, {"model", c.model}, {"m", c.m}};
}

void print(const RunConfig& c, const json& j, const std::string& md) {
    if (c.format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << md;
}

std::string group_string(const ZModulePresentation& g) { return g.to_string(); }

json group_json(const ZModulePresentation& g) { return g.is_zero() ? json("0") : presentation_to_json(g); }

int cmd_rfh_w0(const RunConfig& c) {
    Parsed p = parse(c);
    auto h = rfh_w0(p.model, c.m, p.tau, p.degrees, p.window);
    json j = header(c, "rfh-w0");
    j["tau"] = rational_to_string(p.tau);
    j["window"] = c.window;
    j["results"] = json::array();
    std::ostringstream md;
    md << "RFH^{w0} of " << p.model.name << ", m = " << c.m << "\n\n| degree | group |\n|---|---|\n";
    for (long d = p.degrees.lo; d <= p.degrees.hi; ++d) {
        const auto& g = h[static_cast<std::size_t>(d - p.degrees.lo)];
        j["results"].push_back({{"degree", d}, {"group", group_json(g)}});
        md << "| " << d << " | " << group_string(g) << " |\n";
    }
    j["ok"] = true;
    print(c, j, md.str());
    return kExitOk;
}

int cmd_rfh_full(const RunConfig& c) {
    Parsed p = parse(c);
    FullRFHResult r = full_rfh(p.model, c.m, p.tau, p.degrees, p.coeff);
    // injectivity of id + Psi, widened from one period until it holds or the cap is reached
    const long period = std::max(1L, tower_period(p.model));
    long K = c.truncation > 0 ? c.truncation : period;
    DeltaInjectivityReport inj = delta_injectivity(p.model, c.m, p.tau, K, p.degrees);
    while (c.truncation == 0 && !inj.ok() && K < kTruncationCap) {
        K = std::min(2 * K, kTruncationCap);
        inj = delta_injectivity(p.model, c.m, p.tau, K, p.degrees);
    }
    json j = header(c, "rfh-full");
    j["tau"] = rational_to_string(p.tau);
    j["coeff"] = p.coeff.name();
    j["regime"] = regime_name(r.regime);
    j["results"] = r.to_json();
    j["injectivity"] = {{"truncation", K}, {"ok", inj.ok()}};
    j["ok"] = inj.ok();
    std::ostringstream md;
    md << "Full RFH of " << p.model.name << ", m = " << c.m << ", tau = " << rational_to_string(p.tau) << ", coefficients "
       << p.coeff.name() << " (regime " << regime_name(r.regime) << ")\n\n| degree | group |\n|---|---|\n";
    for (long d = p.degrees.lo; d <= p.degrees.hi; ++d) md << "| " << d << " | " << r.at(d).to_string() << " |\n";
    md << "\nid + Psi injective on |k| <= " << K << ": " << (inj.ok() ? "yes" : "NO") << "\n";
    print(c, j, md.str());
    return inj.ok() ? kExitOk : kExitVerification;
}

int cmd_gysin(const RunConfig& c) {
    Parsed p = parse(c);
    GysinResult g = gysin(p.model, c.m, p.degrees);
    std::map<std::string, const NodeReport*> by_label;
    for (const auto& n : g.report.nodes) by_label[n.label] = &n;
    json j = header(c, "gysin");
    j["nodes"] = json::array();
    std::ostringstream md;
    md << "Gysin sequence of " << p.model.name << ", m = " << c.m << "\n\n| node | group | exact |\n|---|---|---|\n";
    for (const auto& node : g.les.nodes) {
        auto it = by_label.find(node.label);
        if (it == by_label.end()) continue;
        const NodeReport& rep = *it->second;
        j["nodes"].push_back({{"label", node.label}, {"group", group_json(node.group)}, {"exact", rep.ok}});
        md << "| " << node.label << " | " << group_string(node.group) << " | " << (rep.ok ? "yes" : "NO: " + rep.reason) << " |\n";
    }
    j["ok"] = g.report.ok;
    md << "\n" << (g.report.ok ? "all checked nodes exact" : "EXACTNESS FAILURE") << "\n";
    print(c, j, md.str());
    return g.report.ok ? kExitOk : kExitVerification;
}

int cmd_transfer(const RunConfig& c) {
    Parsed p = parse(c);
    TransferCheck t = check_transfer(transfer_maps(p.model, p.tau, p.window, c.m, p.degrees), c.m);
    json j = header(c, "transfer");
    j["t_chain_map"] = t.t_chain_map;
    j["p_chain_map"] = t.p_chain_map;
    j["pt_is_m"] = t.pt_is_m;
    j["tp_is_m"] = t.tp_is_m;
    j["ok"] = t.ok();
    std::ostringstream md;
    md << "P∘T = T∘P = " << c.m << "·id: " << (t.ok() ? "PASS" : "FAIL") << "\n";
    print(c, j, md.str());
    return t.ok() ? kExitOk : kExitVerification;
}

std::string tri(const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "unknown"; }

int cmd_orderability(const RunConfig& c) {
    Parsed p = parse(c);
    OrderabilityReport r = orderability_report(p.model, c.m);
    auto tri_json = [](const std::optional<bool>& b) { return b ? json(*b) : json("unknown"); };
    json j = header(c, "orderability");
    j["rfh_w0_nonzero"] = r.rfh_w0_nonzero;
    j["cap_surjective"] = r.cap_surjective;
    j["c1_primitive"] = r.c1_primitive;
    j["orderable"] = tri_json(r.orderable);
    j["translated_points"] = tri_json(r.translated_points);
    j["degrees"] = {r.degrees.lo, r.degrees.hi};
    j["ok"] = true;
    std::ostringstream md;
    md << "RFH^{w0} " << (r.rfh_w0_nonzero ? "≠ 0" : "= 0") << "; orderability: " << tri(r.orderable) << "\n"
       << "translated points: " << tri(r.translated_points) << "; cap surjective: " << (r.cap_surjective ? "yes" : "no")
       << "; c_1 primitive: " << (r.c1_primitive ? "yes" : "no") << "\n";
    print(c, j, md.str());
    return kExitOk;
}

int cmd_cp2_demo(const RunConfig& c) {
    RunConfig cc = c;
    cc.model = "cp:2";
    Parsed p = parse(cc);
    const BaseModel& cp2 = p.model;
    EnumerateOptions o;
    o.degrees = DegreeRange{-4, 4};
    o.winding = 0;
    json gens = json::array();
    std::ostringstream md;
    md << "cp:2, m = " << c.m << ", tau = " << rational_to_string(p.tau) << "\n\nZero-winding generators\n\n"
       << "| degree | generator | eta | action | FH degree |\n|---|---|---|---|---|\n";
    for (const auto& g : enumerate(cp2, c.m, p.tau, o)) {
        RFHData x = rfh_data(cp2, c.m, p.tau, g);
        gens.push_back({{"degree", x.mu_h}, {"generator", rfh_label(cp2, g)}, {"eta", rational_to_string(x.eta)},
                        {"action", rational_to_string(x.action)}, {"mu_fh", x.mu_fh}});
        md << "| " << x.mu_h << " | " << rfh_label(cp2, g) << " | " << rational_to_string(x.eta) << " | "
           << rational_to_string(x.action) << " | " << x.mu_fh << " |\n";
    }
    json bnd = json::array();
    md << "\nBoundary of check generators\n\n";
    for (std::size_t i = 0; i < 3; ++i) {
        RFHGenerator g{i, 0, 0, Flag::Check};
        std::string s = chain_to_string(cp2, boundary_full(g, cp2, c.m));
        bnd.push_back({{"generator", rfh_label(cp2, g)}, {"boundary", s}});
        md << "- d " << rfh_label(cp2, g) << " = " << s << "\n";
    }
    json prim = json::array();
    RFHGenerator target{0, 5, 0, Flag::Hat};
    md << "\nPrimitives of " << rfh_label(cp2, target) << "\n\n";
    for (const auto& st : primitive_lower(cp2, c.m, target, 5)) {
        prim.push_back({{"partial_sum", chain_to_string(cp2, st.partial_sum)},
                        {"residual", rfh_label(cp2, st.residual)},
                        {"coefficient", int_to_json(st.residual_coeff)}});
        md << "- " << chain_to_string(cp2, st.partial_sum) << "  (residual " << st.residual_coeff.get_str() << "*"
           << rfh_label(cp2, st.residual) << ")\n";
    }
    json j = header(cc, "cp2-demo");
    j["tau"] = rational_to_string(p.tau);
    j["generators"] = gens;
    j["boundaries"] = bnd;
    j["primitives"] = prim;
    j["ok"] = true;
    print(c, j, md.str());
    return kExitOk;
}

int cmd_selftest(const RunConfig& c) {
    auto results = acceptance::run_all();
    if (c.format == "json") {
        json j = {{"command", "selftest"}, {"criteria", json::array()}};
        bool all = true;
        for (const auto& r : results) {
            j["criteria"].push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"info", r.info}});
            all = all && r.pass;
        }
        j["ok"] = all;
        std::cout << j.dump(2) << "\n";
        return all ? kExitOk : kExitVerification;
    }
    return acceptance::report(results, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Floer-theoretic invariants of circle bundles over monotone bases"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "cp:<n> | surface:<g> | point | file:<path>");
        sub->add_option("--m", cfg.m, "bundle degree");
        sub->add_option("--tau", cfg.tau, "positive rational p/q");
        sub->add_option("--degrees", cfg.degrees, "degree range lo..hi");
        sub->add_option("--window", cfg.window, "action window a..b");
        sub->add_option("--coeff", cfg.coeff, "z | fp:<prime>");
        sub->add_option("--format", cfg.format, "md | json")->check(CLI::IsMember({"md", "json"}));
        sub->add_option("--truncation", cfg.truncation, "k-truncation for the injectivity check")->check(CLI::NonNegativeNumber);
    };
    std::vector<std::pair<CLI::App*, int (*)(const RunConfig&)>> commands{
        {app.add_subcommand("rfh-w0", "zero-winding homology"), cmd_rfh_w0},
        {app.add_subcommand("rfh-full", "full homology"), cmd_rfh_full},
        {app.add_subcommand("gysin", "Gysin sequence with exactness report"), cmd_gysin},
        {app.add_subcommand("transfer", "transfer and projection check"), cmd_transfer},
        {app.add_subcommand("orderability", "orderability verdict"), cmd_orderability},
        {app.add_subcommand("cp2-demo", "generator and boundary tables for cp:2"), cmd_cp2_demo},
        {app.add_subcommand("selftest", "run the acceptance suite"), cmd_selftest},
    };
    for (auto& [sub, fn] : commands) common(sub);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        for (auto& [sub, fn] : commands)
            if (sub->parsed()) return fn(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
