#include "freudcaps/certificate.hpp"
#include "freudcaps/gpcap.hpp"
#include "freudcaps/pipeline.hpp"

#include "CLI11.hpp"

#include <Eigen/Core>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fc;

namespace {

enum Exit { kOk = 0, kProofFailure = 2, kInputError = 3, kPrecision = 4 };

struct Globals {
    long bits = 256;
    int threads = 1;
    std::string cache_dir = "freudcaps-cache";
    std::string out;
};

struct Painleve {
    std::string kappa = "4";
    std::string c_minus = "0.987";
    std::string c_plus = "1.025";
    long N1 = 9000000;
};

void add_painleve_options(CLI::App* app, Painleve& p)
{
    app->add_option("--kappa", p.kappa, "Freud weight parameter")->capture_default_str();
    app->add_option("--cminus", p.c_minus, "Lower envelope constant")->capture_default_str();
    app->add_option("--cplus", p.c_plus, "Upper envelope constant")->capture_default_str();
    app->add_option("--n1", p.N1, "Asymptotic threshold N1")->capture_default_str();
}

PipelineConfig make_config(const Globals& g, const Painleve& p)
{
    PipelineConfig cfg;
    cfg.kappa = p.kappa;
    cfg.c_minus = p.c_minus;
    cfg.c_plus = p.c_plus;
    cfg.N1 = p.N1;
    cfg.bits = g.bits;
    cfg.cache_dir = g.cache_dir;
    return cfg;
}

Json stamp(Json j, const Globals& g)
{
    j["version"] = kCertificateVersion;
    j["precision_bits"] = g.bits;
    return j;
}

// Prints the JSON, or merges it into the certificate at --out.
void emit(const Json& j, const Globals& g)
{
    if (g.out.empty())
        std::cout << j.dump(2) << '\n';
    else
        merge_into_file(g.out, j);
}

// Writes text to --out, or to stdout.
template <class Fn>
void emit_text(const Globals& g, Fn&& write)
{
    if (g.out.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(g.out);
    if (!os) throw std::invalid_argument("cannot write " + g.out);
    write(os);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Validated numerics for Freud and Freud-Sobolev bases and Gross-Pitaevskii standing waves"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--bits", g.bits, "Working precision in bits")->capture_default_str()->check(CLI::Range(53L, 1L << 20));
    app.add_option("--threads", g.threads, "Thread count for dense kernels")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", g.cache_dir, "Directory for cached enclosures and quadrature rules")->capture_default_str();
    app.add_option("--out", g.out, "Output file (certificates are merged into an existing JSON object)");

    Painleve p;

    auto* painleve = app.add_subcommand("painleve", "Certify the discrete Painleve I coefficients");
    add_painleve_options(painleve, p);

    auto* coeffs = app.add_subcommand("coeffs", "Write enclosures of the recurrence coefficients a_n");
    add_painleve_options(coeffs, p);
    int length = 0;
    coeffs->add_option("--length", length, "Largest index n")->required()->check(CLI::PositiveNumber);

    auto* constants = app.add_subcommand("constants", "Compactness, Poincare and flux constants");
    add_painleve_options(constants, p);
    int n_split = 2187;
    int cp_n = 2400;
    constants->add_option("--nsplit", n_split, "Split index of the compactness estimate")->capture_default_str();
    constants->add_option("--cp-n", cp_n, "Truncation used for the Poincare constant")->capture_default_str();

    auto* poincare = app.add_subcommand("poincare", "Enclose the Poincare constant");
    add_painleve_options(poincare, p);
    int pn = 2400;
    poincare->add_option("--n", pn, "Truncation index")->capture_default_str()->check(CLI::PositiveNumber);

    auto* compact = app.add_subcommand("compact", "Compactness constant C");
    add_painleve_options(compact, p);
    compact->add_option("--nsplit", n_split, "Split index")->capture_default_str();

    auto* quad = app.add_subcommand("quad-selftest", "Orthonormality self-test of the m = 4 and m = 6 rules");
    quad->add_option("--kappa", p.kappa, "Freud weight parameter")->capture_default_str();

    auto* solve = app.add_subcommand("gp-solve", "Newton solve for an approximate standing wave");
    add_painleve_options(solve, p);
    std::string omega = "8";
    int gp_n = 2200;
    std::string seed = "bump";
    solve->add_option("--omega", omega, "Frequency omega (rational)")->capture_default_str();
    solve->add_option("--n", gp_n, "Truncation index (even, at least N)")->capture_default_str();
    solve->add_option("--seed", seed, "Newton seed")->capture_default_str()->check(CLI::IsMember({"bump", "signed"}));
    solve->add_option("--nsplit", n_split, "Split index of the compactness estimate")->capture_default_str();
    solve->add_option("--cp-n", cp_n, "Truncation used for the Poincare constant")->capture_default_str();

    auto* prove = app.add_subcommand("gp-prove", "Computer-assisted proof around an approximate solution");
    add_painleve_options(prove, p);
    std::string ubar_path;
    std::vector<double> profile;
    std::string profile_out = "profile.csv";
    prove->add_option("--ubar", ubar_path, "Approximate solution file")->required()->check(CLI::ExistingFile);
    prove->add_option("--omega", omega, "Frequency omega (rational)")->capture_default_str();
    prove->add_option("--nsplit", n_split, "Split index of the compactness estimate")->capture_default_str();
    prove->add_option("--cp-n", cp_n, "Truncation used for the Poincare constant")->capture_default_str();
    prove->add_option("--export-profile", profile, "Write phibar on [a, b] with the given step")->expected(3);
    prove->add_option("--profile-out", profile_out, "CSV file for --export-profile")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Recheck the inequalities stored in a certificate");
    std::string cert_path;
    verify->add_option("certificate", cert_path, "Certificate JSON")->required();

    auto* run = app.add_subcommand("run", "Run pipeline stages and write one certificate");
    add_painleve_options(run, p);
    std::vector<std::string> stages;
    run->add_option("--stages", stages, "painleve, constants, poincare, quad, gp (or all)")->delimiter(',');
    run->add_option("--omega", omega, "Frequency omega (rational)")->capture_default_str();
    run->add_option("--n", gp_n, "Truncation index of the proof")->capture_default_str();
    run->add_option("--seed", seed, "Newton seed")->capture_default_str()->check(CLI::IsMember({"bump", "signed"}));
    run->add_option("--nsplit", n_split, "Split index of the compactness estimate")->capture_default_str();
    run->add_option("--cp-n", cp_n, "Truncation used for the Poincare constant")->capture_default_str();
    run->add_option("--ubar", ubar_path, "Approximate solution file instead of a Newton solve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    Eigen::setNbThreads(g.threads);
    try {
        PrecisionGuard guard(g.bits);
        PipelineConfig cfg = make_config(g, p);
        cfg.n_split = n_split;
        cfg.poincare_n = cp_n;
        cfg.gp_n = gp_n;
        cfg.seed = seed;
        cfg.omega = parse_rational(omega);
        cfg.ubar_path = ubar_path;

        if (*painleve) {
            PipelineContext ctx(cfg);
            emit(stamp(ctx.painleve_json(), g), g);
        } else if (*coeffs) {
            PipelineContext ctx(cfg);
            const FreudCoeffs& c = ctx.coeffs();
            if (length > c.length) throw std::invalid_argument("length exceeds the certified range " + std::to_string(c.length));
            const std::vector<Ivl> a(c.a.begin(), c.a.begin() + length + 1);
            emit_text(g, [&](std::ostream& os) { write_coefficients(os, a, 1); });
        } else if (*constants) {
            PipelineContext ctx(cfg);
            emit(stamp(ctx.constants_json(), g), g);
        } else if (*poincare) {
            cfg.poincare_n = pn;
            PipelineContext ctx(cfg);
            if (pn >= ctx.bounds().N)
                emit(stamp(ctx.poincare_json(), g), g);
            else
                emit(stamp(ctx.poincare_lower_json(pn), g), g);
        } else if (*compact) {
            PipelineContext ctx(cfg);
            emit(stamp(ctx.compact_json(n_split), g), g);
        } else if (*quad) {
            const QuadSelfTest q = quad_selftest(p.kappa, g.bits);
            emit(stamp(Json{{"quadrature", q.report}}, g), g);
            return q.ok ? kOk : kProofFailure;
        } else if (*solve) {
            PipelineContext ctx(cfg);
            const ApproxSolution sol = gp_solve(ctx.gp_setup(), seed);
            std::cerr << "Newton converged in " << sol.iterations << " steps, residual " << sol.residual_norm.hi_str(6) << '\n';
            emit_text(g, [&](std::ostream& os) { write_solution(os, sol.ubar); });
        } else if (*prove) {
            std::ifstream in(ubar_path);
            const CoeffVec ubar = read_solution(in);
            cfg.gp_n = ubar.dim() - 1;
            PipelineContext sized(cfg);
            const GPSetup& setup = sized.gp_setup();
            const GPRun r = gp_prove(setup, ubar);
            Json cert = stamp(sized.painleve_json(), g);
            merge_json(cert, gp_json(setup, r));
            emit(cert, g);
            if (profile.size() == 3) {
                std::ofstream os(profile_out);
                if (!os) throw std::invalid_argument("cannot write " + profile_out);
                export_profile(os, setup, ubar, profile[0], profile[1], profile[2]);
            }
            return r.radii.success ? kOk : kProofFailure;
        } else if (*verify) {
            const VerifyResult v = verify_certificate_file(cert_path);
            if (v.ok) {
                std::cout << "certificate verified (" << v.checks << " checks)\n";
                return kOk;
            }
            std::cout << "verification failed: " << v.culprit << '\n';
            return kProofFailure;
        } else if (*run) {
            if (stages.size() == 1 && stages[0] == "all") stages = pipeline_stages();
            if (stages.empty()) {
                std::cerr << run->help();
                return kInputError;
            }
            cfg.stages = stages;
            const PipelineResult res = run_pipeline(cfg);
            emit(res.certificate, g);
            if (res.precision_exhausted) return kPrecision;
            if (res.proof_failed) {
                std::cerr << "stage " << res.failed_stage << " failed: " << res.reason << '\n';
                return kProofFailure;
            }
        }
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << '\n';
        return kPrecision;
    } catch (const EnclosureError& e) {
        std::cerr << "proof failure: " << e.what() << '\n';
        return kProofFailure;
    } catch (const NewtonStagnation& e) {
        std::cerr << "Newton stagnation: " << e.what() << " (last residual " << e.last_residual << ")\n";
        return kProofFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
