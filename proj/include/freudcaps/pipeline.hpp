#pragma once

#include "freudcaps/certificate.hpp"
#include "freudcaps/embed.hpp"
#include "freudcaps/freud.hpp"
#include "freudcaps/gpcap.hpp"
#include "freudcaps/painleve.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fc {

struct PipelineConfig {
    std::string kappa = "4";
    std::string c_minus = "0.987";
    std::string c_plus = "1.025";
    long N1 = 9000000;
    std::vector<std::string> stages;  // painleve, constants, poincare, quad, gp
    int n_split = 2187;
    int poincare_n = 2400;
    int gp_n = 2200;
    Rational omega{8, 1};
    std::string seed = "bump";
    std::string ubar_path;  // load the approximate solution instead of running Newton
    long bits = 256;
    std::string cache_dir;
};

inline const std::vector<std::string>& pipeline_stages()
{
    static const std::vector<std::string> s{"painleve", "constants", "poincare", "quad", "gp"};
    return s;
}

// c = (kappa^2 - 6) / 4 and d = kappa / 2 for a rational kappa.
GPParams gp_params_for(const Rational& kappa, const Rational& omega);

// Lazily computed, cached intermediate results shared by the stages.
class PipelineContext {
public:
    explicit PipelineContext(PipelineConfig config);

    const PipelineConfig& config() const { return cfg_; }
    const BnEnclosure& enclosure();
    const FreudCoeffs& coeffs();
    const CompactnessBounds& bounds();
    const EmbeddingConstants& compactness();
    const PoincareResult& poincare();
    const FluxConstants& flux();
    const GPSetup& gp_setup();

    Json painleve_json();
    Json constants_json();
    Json poincare_json();
    // Poincare lower bound only, for truncations below N.
    Json poincare_lower_json(int n);
    Json compact_json(int n_split);

private:
    PipelineConfig cfg_;
    std::optional<BnEnclosure> enc_;
    std::optional<FreudCoeffs> coeffs_;
    std::optional<CompactnessBounds> cb_;
    std::optional<EmbeddingConstants> compact_;
    std::optional<PoincareResult> poincare_;
    std::optional<FluxConstants> flux_;
    std::unique_ptr<GPSetup> gp_;
};

struct QuadSelfTest {
    bool ok = true;
    Json report;
};

// Orthonormality defect up to degree 30, weight positivity and node separation for m = 4 and 6.
QuadSelfTest quad_selftest(const std::string& kappa_text, long bits);

struct GPRun {
    ApproxSolution solution;
    ProofBounds bounds;
    RadiiResult radii;
    Ivl h1R_bound;
    std::optional<PositivityResult> positivity;
};

// Newton solve from a seed ("bump" or "signed").
ApproxSolution gp_solve(const GPSetup& setup, const std::string& seed);
// Bounds, radii, H^1(R) error and, on success, positivity.
GPRun gp_prove(const GPSetup& setup, const CoeffVec& ubar);
Json gp_json(const GPSetup& setup, const GPRun& run);

// Approximate solutions in the coefficient file format, Q basis.
void write_solution(std::ostream& os, const CoeffVec& ubar);
CoeffVec read_solution(std::istream& is);

struct PipelineResult {
    Json certificate;
    bool proof_failed = false;
    bool precision_exhausted = false;
    std::string failed_stage;
    std::string reason;
};

// Runs the requested stages in order and stops at the first one that cannot be certified.
// Throws std::invalid_argument for an empty or unknown stage list.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace fc
