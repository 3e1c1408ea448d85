#include "freudcaps/pipeline.hpp"

#include "freudcaps/quad.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fc {

namespace {

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json params_block(const PipelineConfig& cfg)
{
    return Json{{"kappa", cfg.kappa}, {"c_minus", cfg.c_minus}, {"c_plus", cfg.c_plus}};
}

Json thresholds_block(const BnEnclosure& enc)
{
    return Json{{"N1", enc.N1},
                {"N2", enc.N2},
                {"N", enc.N},
                {"b1", ivl_to_json(enc.b1)},
                {"envelope", Json{{"c_minus", ivl_to_json(enc.c_minus)}, {"c_plus", ivl_to_json(enc.c_plus)}}}};
}

Json tail_block(const EmbeddingConstants& e)
{
    return Json{{"n_split", e.n_split}, {"C_alpha", ivl_to_json(e.C_alpha)}, {"theta", ivl_to_json(e.theta)},
                {"C12", ivl_to_json(e.C12)}, {"C22", ivl_to_json(e.C22)}, {"C", ivl_to_json(e.C)}};
}

}  // namespace

GPParams gp_params_for(const Rational& kappa, const Rational& omega)
{
    if (kappa.den <= 0 || kappa.den > 3037000499L || std::labs(kappa.num) > 3037000499L)
        throw std::invalid_argument("kappa is out of range");
    GPParams p;
    p.kappa = kappa;
    p.omega = omega;
    // c = (kappa^2 - 6) / 4, d = kappa / 2
    p.c = Rational{kappa.num * kappa.num - 6 * kappa.den * kappa.den, 4 * kappa.den * kappa.den};
    p.d = Rational{kappa.num, 2 * kappa.den};
    for (Rational* r : {&p.c, &p.d}) {
        long a = std::labs(r->num), b = r->den;
        while (b != 0) {
            const long t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            r->num /= a;
            r->den /= a;
        }
    }
    return p;
}

PipelineContext::PipelineContext(PipelineConfig config) : cfg_(std::move(config)) {}

const BnEnclosure& PipelineContext::enclosure()
{
    if (!enc_) {
        PainleveOptions opt;
        opt.N1 = cfg_.N1;
        enc_ = cached_painleve(cfg_.cache_dir, cfg_.kappa, cfg_.c_minus, cfg_.c_plus, opt);
    }
    return *enc_;
}

const FreudCoeffs& PipelineContext::coeffs()
{
    if (!coeffs_) {
        const BnEnclosure& enc = enclosure();
        coeffs_ = coeffs_from_enclosure(enc, decimal_real(cfg_.kappa)(), static_cast<int>(enc.N2));
    }
    return *coeffs_;
}

const CompactnessBounds& PipelineContext::bounds()
{
    if (!cb_) {
        const BnEnclosure& enc = enclosure();
        cb_ = compactness_constants(coeffs(), enc.N, enc.c_plus);
    }
    return *cb_;
}

const EmbeddingConstants& PipelineContext::compactness()
{
    if (!compact_) compact_ = compactness_constant(coeffs(), cfg_.n_split, bounds());
    return *compact_;
}

const PoincareResult& PipelineContext::poincare()
{
    if (!poincare_) poincare_ = poincare_enclosure(coeffs(), cfg_.poincare_n, bounds());
    return *poincare_;
}

const FluxConstants& PipelineContext::flux()
{
    if (!flux_) flux_ = flux_bound(coeffs(), cfg_.n_split, enclosure().c_minus, bounds(), poincare().upper);
    return *flux_;
}

const GPSetup& PipelineContext::gp_setup()
{
    if (!gp_) {
        const GPParams params = gp_params_for(parse_rational(cfg_.kappa), cfg_.omega);
        GPSetupOptions opt;
        opt.cache_dir = cfg_.cache_dir;
        opt.kappa_text = cfg_.kappa;
        gp_ = std::make_unique<GPSetup>(prepare_gp(params, coeffs(), bounds(), flux(), poincare().upper, cfg_.gp_n, opt));
    }
    return *gp_;
}

Json PipelineContext::painleve_json()
{
    return Json{{"params", params_block(cfg_)}, {"thresholds", thresholds_block(enclosure())}};
}

Json PipelineContext::compact_json(int n_split)
{
    const EmbeddingConstants e =
        n_split == cfg_.n_split ? compactness() : compactness_constant(coeffs(), n_split, bounds());
    Json out = painleve_json();
    out["constants"] = tail_block(e);
    return out;
}

Json PipelineContext::poincare_json()
{
    const PoincareResult& p = poincare();
    Json out = painleve_json();
    out["poincare"] = Json{{"n", p.n},
                           {"lower", ivl_to_json(p.lower)},
                           {"upper", ivl_to_json(p.upper)},
                           {"lower_even", ivl_to_json(p.lower_even)},
                           {"lower_odd", ivl_to_json(p.lower_odd)}};
    out["constants"] = Json{{"C_P", ivl_to_json(p.enclosure())}};
    return out;
}

Json PipelineContext::poincare_lower_json(int n)
{
    const Ivl lower = poincare_lower(coeffs(), n);
    Json out = painleve_json();
    out["poincare_lower"] = Json{{"n", n}, {"lower", ivl_to_json(lower)}};
    return out;
}

Json PipelineContext::constants_json()
{
    Json out = compact_json(cfg_.n_split);
    merge_json(out, poincare_json());
    const FluxConstants& f = flux();
    merge_json(out, Json{{"constants", Json{{"c", ivl_to_json(f.c)},
                                       {"c_alpha_part", ivl_to_json(f.c_alpha_part)},
                                       {"c_beta_part", ivl_to_json(f.c_beta_part)},
                                       {"Z", ivl_to_json(f.Z)},
                                       {"linf_const", ivl_to_json(f.linf_const)},
                                       {"h1R_const", ivl_to_json(f.h1R_const)}}}});
    return out;
}

QuadSelfTest quad_selftest(const std::string& kappa_text, long bits)
{
    PrecisionGuard g(bits);
    QuadSelfTest out;
    out.report = Json::object();
    for (int m : {4, 6}) {
        const QuadratureRule rule = freud_gauss_rule(m, decimal_real(kappa_text), nodes_for_degree(60));
        bool weights = true;
        bool disjoint = true;
        for (int i = 0; i < rule.half(); ++i) {
            weights = weights && rule.weights[static_cast<std::size_t>(i)].positive();
            if (i == 0)
                disjoint = disjoint && rule.nodes[0].positive();
            else
                disjoint = disjoint && certainly_lt(rule.nodes[static_cast<std::size_t>(i - 1)], rule.nodes[static_cast<std::size_t>(i)]);
        }
        const Ivl defect = orthonormality_defect(rule, 30);
        const bool small = defect.hi_d() <= 1e-20;
        out.ok = out.ok && weights && disjoint && small;
        out.report["m" + std::to_string(m)] = Json{{"nodes", rule.N_nodes},
                                                  {"orthonormality_defect", ivl_to_json(defect, 20)},
                                                  {"weights_positive", weights},
                                                  {"nodes_disjoint", disjoint},
                                                  {"defect_below_1e-20", small}};
    }
    out.report["bits"] = bits;
    return out;
}

ApproxSolution gp_solve(const GPSetup& setup, const std::string& seed)
{
    if (seed == "bump") return newton_solve(setup, bump_seed(setup));
    if (seed == "signed") return newton_solve(setup, signed_seed(setup));
    throw std::invalid_argument("seed must be bump or signed");
}

GPRun gp_prove(const GPSetup& setup, const CoeffVec& ubar)
{
    GPRun run;
    run.solution.ubar = ubar;
    run.solution.n = setup.n;
    const GPOperators ops = assemble_operators(setup, ubar);
    run.solution.residual_norm = norm2(ops.nl.F);
    run.bounds = compute_bounds(setup, ops);
    run.radii = radii(run.bounds.Y, run.bounds.Z1, run.bounds.Z2, run.bounds.Z3);
    if (run.radii.success) {
        run.h1R_bound = h1R_error(run.radii.delta, setup.flux);
        run.positivity = positivity_check(setup, ubar, run.radii.delta);
    }
    return run;
}

Json gp_json(const GPSetup& setup, const GPRun& run)
{
    const ProofBounds& b = run.bounds;
    const GPParams& p = setup.params;
    Json out{{"params", Json{{"kappa", rational_str(p.kappa)},
                             {"c", rational_str(p.c)},
                             {"d", rational_str(p.d)},
                             {"omega", rational_str(p.omega)}}},
             {"n", setup.n},
             {"Y", ivl_to_json(b.Y)},
             {"Z11", ivl_to_json(b.Z11)},
             {"Z12", ivl_to_json(b.Z12)},
             {"Z21", ivl_to_json(b.Z21)},
             {"Z22", ivl_to_json(b.Z22)},
             {"Z1", ivl_to_json(b.Z1)},
             {"Z2", ivl_to_json(b.Z2)},
             {"Z3", ivl_to_json(b.Z3)},
             {"An_norm", ivl_to_json(b.An_norm)},
             {"residual_norm", ivl_to_json(run.solution.residual_norm)},
             {"success", run.radii.success}};
    out["constants"] = Json{{"c", ivl_to_json(setup.flux.c)},
                            {"Z", ivl_to_json(setup.flux.Z)},
                            {"C_P", ivl_to_json(setup.C_P)},
                            {"linf_const", ivl_to_json(setup.linf_const)},
                            {"h1R_const", ivl_to_json(setup.h1R_const)}};
    out["gp_tail"] = tail_block(setup.tail);
    if (run.radii.success) {
        out["delta"] = ivl_to_json(run.radii.delta);
        out["delta_lo"] = ivl_to_json(run.radii.delta_lo);
        out["delta_hi"] = ivl_to_json(run.radii.delta_hi);
        out["delta_hi_capped"] = run.radii.delta_hi_capped;
        out["h1R_bound"] = ivl_to_json(run.h1R_bound);
    } else {
        out["delta_lo"] = nullptr;
        out["delta_hi"] = nullptr;
        out["h1R_bound"] = nullptr;
    }
    if (run.positivity) {
        const PositivityResult& q = *run.positivity;
        out["positivity"] = Json{{"verdict", q.positive ? "positive" : "inconclusive"},
                                 {"reason", q.reason},
                                 {"r0", ivl_to_json(q.r0)},
                                 {"sup_error", ivl_to_json(q.sup_error)},
                                 {"lipschitz", ivl_to_json(q.lipschitz)},
                                 {"evaluations", q.evaluations}};
    } else {
        out["positivity"] = Json{{"verdict", "not attempted"}};
    }
    return out;
}

void write_solution(std::ostream& os, const CoeffVec& ubar)
{
    os << "# approximate solution, Q basis, even, n = " << ubar.dim() - 1 << '\n';
    write_coefficients(os, ubar.entries, 0, 40);
}

CoeffVec read_solution(std::istream& is)
{
    CoeffVec u;
    u.basis = Basis::Q;
    u.parity = Parity::Even;
    u.entries = read_coefficients(is);
    if (u.entries.empty()) throw std::invalid_argument("empty solution file");
    return u;
}

PipelineResult run_pipeline(const PipelineConfig& config)
{
    if (config.stages.empty()) throw std::invalid_argument("no stages requested");
    const std::vector<std::string>& known = pipeline_stages();
    for (const std::string& s : config.stages)
        if (std::find(known.begin(), known.end(), s) == known.end()) throw std::invalid_argument("unknown stage: " + s);

    PrecisionGuard g(config.bits);
    PipelineConfig cfg = config;
    std::optional<CoeffVec> loaded;
    if (!cfg.ubar_path.empty()) {
        std::ifstream in(cfg.ubar_path);
        if (!in) throw std::invalid_argument("cannot open " + cfg.ubar_path);
        loaded = read_solution(in);
        cfg.gp_n = loaded->dim() - 1;
    }
    PipelineContext ctx(cfg);
    PipelineResult res;
    Json& cert = res.certificate;
    cert = Json{{"version", kCertificateVersion},
                {"precision_bits", config.bits},
                {"timestamps", Json{{"started", utc_now()}}},
                {"params", params_block(config)}};
    auto requested = [&](const std::string& s) {
        return std::find(config.stages.begin(), config.stages.end(), s) != config.stages.end();
    };
    for (const std::string& stage : known) {
        if (!requested(stage)) continue;
        try {
            if (stage == "painleve") {
                merge_json(cert, ctx.painleve_json());
            } else if (stage == "constants") {
                merge_json(cert, ctx.constants_json());
            } else if (stage == "poincare") {
                merge_json(cert, ctx.poincare_json());
            } else if (stage == "quad") {
                const QuadSelfTest q = quad_selftest(config.kappa, config.bits);
                cert["quadrature"] = q.report;
                if (!q.ok) {
                    res.proof_failed = true;
                    res.reason = "quadrature self-test failed";
                }
            } else if (stage == "gp") {
                const GPSetup& setup = ctx.gp_setup();
                const CoeffVec ubar = loaded ? *loaded : gp_solve(setup, config.seed).ubar;
                const GPRun run = gp_prove(setup, ubar);
                merge_json(cert, gp_json(setup, run));
                if (!run.radii.success) {
                    res.proof_failed = true;
                    res.reason = "radii polynomials give no contraction";
                }
            }
        } catch (const PrecisionExhausted& e) {
            res.precision_exhausted = true;
            res.reason = e.what();
        } catch (const EnclosureError& e) {
            res.proof_failed = true;
            res.reason = e.what();
        } catch (const NewtonStagnation& e) {
            res.proof_failed = true;
            res.reason = e.what();
        }
        if (res.proof_failed || res.precision_exhausted) {
            res.failed_stage = stage;
            cert["failure"] = Json{{"stage", stage}, {"reason", res.reason}};
            break;
        }
    }
    merge_json(cert, Json{{"timestamps", Json{{"finished", utc_now()}}}});
    return res;
}

}  // namespace fc
