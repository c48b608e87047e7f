#include "fibscope/cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "fibscope/certify/certify.hpp"
#include "fibscope/certify/export.hpp"
#include "fibscope/certify/vg.hpp"
#include "fibscope/error.hpp"
#include "fibscope/io/report_json.hpp"
#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/milnor/milnor.hpp"
#include "fibscope/numeric/asymptotic.hpp"
#include "fibscope/numeric/k0.hpp"
#include "fibscope/numeric/sampling.hpp"

namespace fibscope {

const char* const kBroughtonSpec =
    "# Broughton's polynomial z + z^2 w, rho = |w|^2\n"
    "n = 2\n"
    "G1 = z1 + z1^2*z2\n"
    "rho = 0, 1\n";

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<double> kDemoRadii{0.25, 0.5, 0.75, 1, 1.25, 1.5, 2, 3, 5, 10, 100, 1000};

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::uint64_t seed = 42;
    std::vector<double> radii = RadiusSchedule{}.radii;
    std::size_t samples = RadiusSchedule{}.samples_per_radius;
    double tol = RadiusSchedule{}.newton_tol;
    double cluster_tol = AsymptoticOptions{}.cluster_tol;
    std::string out = "fibscope-out";
    std::string format = "csv";
    std::vector<std::size_t> projection;
    std::string measure = "sigma-min";
    std::size_t k0_attempts = CertifyOptions{}.k0_attempts;

    json to_json() const {
        return {{"subcommand", subcommand}, {"input", input},     {"seed", seed},
                {"radii", radii},           {"samples", samples}, {"tol", tol},
                {"cluster_tol", cluster_tol}, {"out", out},       {"format", format},
                {"projection", projection}, {"measure", measure}, {"k0_attempts", k0_attempts}};
    }

    RadiusSchedule schedule() const {
        RadiusSchedule s;
        s.radii = radii;
        s.samples_per_radius = samples;
        s.newton_tol = tol;
        return s;
    }

    AsymptoticOptions asymptotic() const {
        AsymptoticOptions o;
        o.cluster_tol = cluster_tol;
        o.measure = parse_measure(measure);
        return o;
    }

    std::optional<Projection> projection_axes() const {
        if (projection.empty()) return std::nullopt;
        if (projection.size() != 3) throw std::invalid_argument("--projection takes exactly three axes");
        return Projection{projection[0], projection[1], projection[2]};
    }
};

/// Failure reported with exit code 1 and a kind tag.
struct Failure {
    std::string kind;
    std::string message;
};

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    MappingSpec load() const {
        std::ifstream in(cfg_.input, std::ios::binary);
        if (!in) throw Failure{"io", "cannot read '" + cfg_.input + "'"};
        std::ostringstream text;
        text << in.rdbuf();
        return parse_mapping(text.str());
    }

    void write(const std::string& name, const std::string& contents) const {
        fs::create_directories(cfg_.out);
        const fs::path path = fs::path(cfg_.out) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Failure{"io", "cannot write '" + path.string() + "'"};
        f << contents;
        if (!f) throw Failure{"io", "write failed for '" + path.string() + "'"};
        out_ << "wrote " << path.string() << '\n';
    }

    void write_json(const std::string& name, json body) const {
        body["config"] = cfg_.to_json();
        body["generated_at"] = timestamp();
        write(name, body.dump(2) + "\n");
    }

    std::ostream& out() const { return out_; }
    const RunConfig& cfg() const { return cfg_; }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
};

SampleCloud sample_schedule(const MappingSpec& spec, const std::vector<double>& radii, std::size_t count,
                            std::uint64_t seed, double tol) {
    const MilnorPresentation pres = milnor_h(spec.map, spec.weights, {false});
    if (pres.degenerate()) throw DomainError("identically zero presentation");
    NewtonOptions opts;
    opts.tol = tol;
    SampleCloud cloud;
    cloud.n = spec.n;
    cloud.seed = seed;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        SampleCloud band = newton_on_milnor(pres, radii[k], count, seed, opts, k);
        for (const auto& [key, value] : band.meta) cloud.meta["band" + std::to_string(k) + "." + key] = value;
        cloud.append(band);
    }
    return cloud;
}

void cmd_parse(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const std::string canonical = format_spec(spec);
    ctx.out() << canonical;
    ctx.write_json("parse.json", {{"canonical", canonical}, {"n", spec.n}, {"charts", spec.charts.size()}});
}

void cmd_milnor(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const MilnorPresentation pres = milnor_h(spec.map, spec.weights);
    ctx.out() << "h = " << pres.h.to_string() << '\n';
    json cof = json::array();
    for (const auto& v : pres.cofactors.v) cof.push_back(v.to_string());
    ctx.write_json("milnor.json", {{"h", pres.h.to_string()},
                                   {"re_h", pres.h_real.first.to_string()},
                                   {"im_h", pres.h_real.second.to_string()},
                                   {"cofactors", cof},
                                   {"degenerate", pres.degenerate()}});
}

void cmd_sample(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const auto& cfg = ctx.cfg();
    cfg.schedule().validate();
    const SampleCloud cloud = sample_schedule(spec, cfg.radii, cfg.samples, cfg.seed, cfg.tol);
    ctx.out() << "samples " << cloud.size() << '\n';
    ctx.write("sample.csv", cloud_csv(cloud));
    ctx.write_json("sample.json", {{"cloud", summary_json(cloud)}});
}

void cmd_asymptotic(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const auto& cfg = ctx.cfg();
    const AsymptoticReport rep = estimate_asymptotic_set(spec, cfg.schedule(), cfg.seed, cfg.asymptotic());
    ctx.out() << "S_G verdict " << to_string(rep.verdict) << ", " << rep.clusters.size() << " clusters\n";
    ctx.write("asymptotic.csv", cloud_csv(rep.retained));
    ctx.write_json("asymptotic.json", {{"asymptotic", to_json(rep)}});
}

void cmd_kinf(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const auto& cfg = ctx.cfg();
    const AsymptoticReport sg = estimate_asymptotic_set(spec, cfg.schedule(), cfg.seed, cfg.asymptotic());
    const AsymptoticReport rep = estimate_kinf(spec, cfg.schedule(), cfg.seed, cfg.asymptotic(), &sg);
    ctx.out() << "K_inf candidates " << rep.kinf_candidates.size() << ", containment violations "
              << rep.containment_violations.size() << '\n';
    ctx.write_json("kinf.json", {{"kinf", kinf_json(rep)}, {"measure", cfg.measure}, {"sg_verdict", to_string(sg.verdict)}});
}

void cmd_leading(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const LeadingRank r = leading_rank(spec.map, ctx.cfg().seed);
    ctx.out() << "leading rank " << r.rank << ", corank " << r.corank << '\n';
    ctx.write_json("leading.json", {{"leading_rank", to_json(r)}, {"n", spec.n}});
}

CertifyOptions certify_options(const RunConfig& cfg) {
    CertifyOptions o;
    o.k0_attempts = cfg.k0_attempts;
    o.asymptotic = cfg.asymptotic();
    return o;
}

void cmd_certify(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const auto& cfg = ctx.cfg();
    const Certificate cert = certify(spec, cfg.schedule(), cfg.seed, certify_options(cfg));
    ctx.out() << "conclusion (" << to_string(cert.conclusion) << ") " << cert.statement << '\n';
    ctx.write_json("certificate.json", {{"certificate", to_json(cert)}});
}

void export_vg(const Context& ctx, const VGCloud& vg, const std::string& stem) {
    const ExportFormat f = parse_format(ctx.cfg().format);
    ctx.write(stem + "." + file_extension(f), export_cloud(vg, f, ctx.cfg().projection_axes()));
}

void cmd_embed(const Context& ctx) {
    const MappingSpec spec = ctx.load();
    const auto& cfg = ctx.cfg();
    cfg.schedule().validate();
    // validate the export request before the sampling work
    parse_format(cfg.format);
    const SampleCloud cloud = sample_schedule(spec, cfg.radii, cfg.samples, cfg.seed, cfg.tol);
    const AsymptoticReport sg = estimate_asymptotic_set(spec, cfg.schedule(), cfg.seed, cfg.asymptotic());
    const VGCloud vg = embed_vg(spec, cloud, &sg, {1e-2, cfg.cluster_tol});
    if (parse_format(cfg.format) != ExportFormat::Csv) resolve_projection(vg, cfg.projection_axes());
    ctx.out() << "embedded " << vg.size() << " points, " << vg.sing_at_infinity.size() << " singular at infinity\n";
    export_vg(ctx, vg, "embed");
    ctx.write_json("embed.json", {{"vg", summary_json(vg)}, {"sg_verdict", to_string(sg.verdict)}});
}

void cmd_demo(const Context& ctx, const std::string& name) {
    if (name != "broughton") throw CLI::ValidationError("demo", "unknown demo '" + name + "' (available: broughton)");
    const auto& cfg = ctx.cfg();
    const MappingSpec spec = parse_mapping(kBroughtonSpec);
    const Certificate cert = certify(spec, cfg.schedule(), cfg.seed, certify_options(cfg));
    const SampleCloud cloud = sample_schedule(spec, kDemoRadii, cfg.samples, cfg.seed, cfg.tol);
    const VGCloud vg = embed_vg(spec, cloud, &cert.sg, {1e-2, cfg.cluster_tol});
    ctx.out() << "h = " << milnor_h(spec.map, spec.weights, {false}).h.to_string() << '\n';
    ctx.out() << "S_G verdict " << to_string(cert.sg_verdict) << ", conclusion (" << to_string(cert.conclusion) << ")\n";
    ctx.out() << "embedded " << vg.size() << " points, " << vg.sing_at_infinity.size() << " singular at infinity\n";
    ctx.write("demo.svg", export_cloud(vg, ExportFormat::Svg));
    ctx.write("demo.csv", export_cloud(vg, ExportFormat::Csv));
    ctx.write("demo.ply", export_cloud(vg, ExportFormat::PlyBinary));
    ctx.write("demo.map", format_spec(spec));
    ctx.write_json("certificate.json", {{"certificate", to_json(cert)}});
    ctx.write_json("demo.json", {{"demo", name},
                                 {"radii", kDemoRadii},
                                 {"vg", summary_json(vg)},
                                 {"asymptotic", to_json(cert.sg)}});
}

std::string spec_error_kind(const SpecError& e) {
    return e.kind() == SpecError::Kind::Syntax ? "spec-syntax" : "spec-semantic";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string demo_name;

    CLI::App app{"fibscope: Milnor sets, asymptotic sets and V_G clouds of polynomial maps C^n -> C^(n-1)",
                 "fibscope"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("spec", cfg.input, "mapping document")->required();
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--radii", cfg.radii, "radius schedule, comma separated")->delimiter(',');
        sub->add_option("--samples", cfg.samples, "samples per radius");
        sub->add_option("--tol", cfg.tol, "Newton tolerance on the relative residual |h|");
        sub->add_option("--cluster-tol", cfg.cluster_tol, "clustering tolerance in G-image space");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--format", cfg.format, "export format")->check(CLI::IsMember({"csv", "ply", "ply-ascii", "svg"}));
        sub->add_option("--projection", cfg.projection, "three 1-based axes, comma separated")->delimiter(',');
        sub->add_option("--measure", cfg.measure, "differential measure for K_inf")
            ->check(CLI::IsMember({"sigma-min", "operator-norm", "kuo"}));
        sub->add_option("--k0-attempts", cfg.k0_attempts, "Newton starts for the critical point probe");
    };

    struct Entry {
        const char* name;
        const char* help;
        void (*fn)(const Context&);
    };
    const Entry entries[] = {
        {"parse", "validate a mapping document and print its canonical form", cmd_parse},
        {"milnor", "print the Milnor presentation h", cmd_milnor},
        {"sample", "sample the Milnor set on each sphere of the schedule", cmd_sample},
        {"asymptotic", "estimate the asymptotic set S_G", cmd_asymptotic},
        {"kinf", "asymptotic critical value candidates and the S_G containment check", cmd_kinf},
        {"leading", "generic rank of the leading forms", cmd_leading},
        {"certify", "graded fibration certificate", cmd_certify},
        {"embed", "embed samples into V_G and export the cloud", cmd_embed},
    };
    std::vector<CLI::App*> subs;
    for (const auto& e : entries) {
        subs.push_back(app.add_subcommand(e.name, e.help));
        add_common(subs.back(), true);
    }
    CLI::App* demo = app.add_subcommand("demo", "end-to-end pipeline on a built-in example");
    demo->add_option("name", demo_name, "example name (broughton)")->required();
    add_common(demo, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "fibscope: error: usage: " << one_line(e.what()) << '\n';
        err << app.help();
        return kExitUsage;
    }

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (!subs[k]->parsed()) continue;
            cfg.subcommand = entries[k].name;
            Context ctx(cfg, out);
            entries[k].fn(ctx);
            return kExitOk;
        }
        cfg.subcommand = "demo";
        cfg.input = "builtin:" + demo_name;
        Context ctx(cfg, out);
        cmd_demo(ctx, demo_name);
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        err << "fibscope: error: usage: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const SpecError& e) {
        err << "fibscope: error: " << spec_error_kind(e) << " at " << e.line() << ':' << e.column() << ": "
            << one_line(e.detail()) << '\n';
    } catch (const DomainError& e) {
        err << "fibscope: error: domain: " << one_line(e.what()) << '\n';
    } catch (const Failure& e) {
        err << "fibscope: error: " << e.kind << ": " << one_line(e.message) << '\n';
    } catch (const std::invalid_argument& e) {
        // bad option values (schedule, projection, format) are usage errors
        err << "fibscope: error: usage: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "fibscope: error: internal: " << one_line(e.what()) << '\n';
    }
    return kExitDomain;
}

}  // namespace fibscope
