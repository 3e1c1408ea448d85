#include "doctest.h"

#include "freudcaps/certificate.hpp"
#include "freudcaps/embed.hpp"
#include "freudcaps/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace fc;

namespace {

// A certificate assembled from the closed forms and a bound set shaped like the desk-scale proof.
Json sample_certificate()
{
    PrecisionGuard g(256);
    const Ivl cplus = Ivl::parse("1.025");
    const Ivl C_alpha = alpha_growth_constant(cplus);
    const Ivl theta = beta_ratio_constant(cplus, 2187);
    const Ivl C22 = Ivl(1) / (C_alpha * (Ivl(1) - theta));
    const Ivl C12 = Ivl::parse("0.31");
    const Ivl C = Ivl(sqrt(sqr(C12) + sqr(C22)).hi());
    const Ivl c = Ivl::parse("24.64");
    const Ivl Z = Ivl::parse("103.51");
    const Ivl C_P = Ivl::parse("33.5801");
    const Ivl linf = Ivl((sqrt(Z * (c + Ivl(1))) * root4(C_P)).hi());
    const Ivl h1R = Ivl((sqrt(Z) * sqrt(C_P + sqr(c + Ivl(1)) / Ivl(4))).hi());

    ProofBounds b;
    b.Y = Ivl::parse("3e-16");
    b.Z11 = Ivl::parse("3e-11");
    b.Z12 = Ivl::parse("1.5e-4");
    b.Z21 = Ivl::parse("1.6e-4");
    b.Z22 = Ivl::parse("0.3627");
    b.Z1 = Ivl::parse("0.3628");
    b.Z2 = Ivl::parse("2.2e6");
    b.Z3 = Ivl((Ivl(6) * Z * (c + Ivl(1)) * sqr(C_P) * sqrt(C_P)).hi());
    const RadiiResult r = radii(b.Y, b.Z1, b.Z2, b.Z3);
    REQUIRE(r.success);

    Json cert{{"version", kCertificateVersion},
              {"precision_bits", 256},
              {"params", {{"kappa", "4"}, {"c", "5/2"}, {"d", "2"}, {"omega", "8"}, {"c_plus", "1.025"}}},
              {"thresholds", {{"N1", 9000000}, {"N2", 9215}, {"N", 2187}}},
              {"constants",
               {{"C_alpha", ivl_to_json(C_alpha)},
                {"theta", ivl_to_json(theta)},
                {"C12", ivl_to_json(C12)},
                {"C22", ivl_to_json(C22)},
                {"C", ivl_to_json(C)},
                {"c", ivl_to_json(c)},
                {"Z", ivl_to_json(Z)},
                {"C_P", ivl_to_json(C_P)},
                {"linf_const", ivl_to_json(linf)},
                {"h1R_const", ivl_to_json(h1R)}}},
              {"poincare", {{"lower", ivl_to_json(Ivl::parse("33.580042199"))}, {"upper", ivl_to_json(C_P)}}},
              {"success", true},
              {"delta", ivl_to_json(r.delta)},
              {"delta_lo", ivl_to_json(r.delta_lo)},
              {"delta_hi", ivl_to_json(r.delta_hi)},
              {"h1R_bound", ivl_to_json(Ivl((h1R * r.delta).hi()))}};
    for (const auto& [key, x] : {std::pair<const char*, const Ivl*>{"Y", &b.Y}, {"Z11", &b.Z11}, {"Z12", &b.Z12}, {"Z21", &b.Z21},
                                 {"Z22", &b.Z22}, {"Z1", &b.Z1}, {"Z2", &b.Z2}, {"Z3", &b.Z3}})
        cert[key] = ivl_to_json(*x);
    return cert;
}

int exit_code(const std::string& command)
{
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("a consistent certificate verifies")
{
    const VerifyResult v = verify_certificate(sample_certificate());
    CHECK(v.ok);
    CHECK(v.culprit.empty());
    CHECK(v.checks > 20);
}

TEST_CASE("tampered certificates name the failing check")
{
    PrecisionGuard g(256);
    Json cert = sample_certificate();
    cert["constants"]["theta"] = ivl_to_json(Ivl::parse("1.1"));
    VerifyResult v = verify_certificate(cert);
    CHECK_FALSE(v.ok);
    CHECK(v.culprit == "theta < 1");

    cert = sample_certificate();
    const Ivl C22 = ivl_from_json(cert["constants"]["C22"]);
    cert["constants"]["C"] = ivl_to_json(C22 * Ivl::parse("0.99"));
    v = verify_certificate(cert);
    CHECK_FALSE(v.ok);
    CHECK(v.culprit == "C >= sqrt(C12^2 + C22^2)");

    cert = sample_certificate();
    cert["params"]["d"] = "1";
    CHECK(verify_certificate(cert).culprit == "6 + 4c - kappa^2 = 0 and 2d = kappa");

    cert = sample_certificate();
    cert["Z1"] = ivl_to_json(Ivl::parse("0.1"));
    CHECK(verify_certificate(cert).culprit == "Z1 >= |[[Z11, Z12], [Z21, Z22]]|");

    cert = sample_certificate();
    cert["delta"] = ivl_to_json(Ivl::parse("0.5"));
    CHECK_FALSE(verify_certificate(cert).ok);

    cert = sample_certificate();
    cert["version"] = "0";
    CHECK(verify_certificate(cert).culprit == "version");

    cert = sample_certificate();
    cert["thresholds"]["N"] = 9300;
    CHECK(verify_certificate(cert).culprit == "N <= N2 + 1");
}

TEST_CASE("malformed certificates are input errors")
{
    CHECK_THROWS_AS(verify_certificate(Json::array()), std::invalid_argument);
    Json cert = sample_certificate();
    cert["constants"]["theta"] = 0.35;
    CHECK_THROWS_AS(verify_certificate(cert), std::invalid_argument);
    cert = sample_certificate();
    cert.erase("Z2");
    CHECK_THROWS_AS(verify_certificate(cert), std::invalid_argument);
}

TEST_CASE("interval serialization is conservative and idempotent")
{
    PrecisionGuard g(256);
    const Ivl x = Ivl(1) / Ivl(3) + symmetric(Ivl(1e-30));
    const Ivl back = ivl_from_json(ivl_to_json(x));
    CHECK(back.contains(x));
    CHECK(ivl_to_json(back) == ivl_to_json(x));
    CHECK(back.width_d() <= x.width_d() + 1e-38);
}

TEST_CASE("certificates merge key by key")
{
    Json a{{"version", "1"}, {"constants", {{"c", 1}, {"Z", 2}}}};
    merge_json(a, Json{{"constants", {{"c", 3}}}, {"Y", 4}});
    CHECK(a["constants"]["c"] == 3);
    CHECK(a["constants"]["Z"] == 2);
    CHECK(a["Y"] == 4);

    const std::string path = (std::filesystem::temp_directory_path() / "freudcaps_merge_test.json").string();
    std::remove(path.c_str());
    merge_into_file(path, Json{{"version", "1"}});
    const Json merged = merge_into_file(path, Json{{"thresholds", {{"N", 2187}}}});
    CHECK(merged["version"] == "1");
    CHECK(merged["thresholds"]["N"] == 2187);
    std::remove(path.c_str());
}

TEST_CASE("GP parameters from kappa")
{
    const GPParams p = gp_params_for(Rational{4, 1}, Rational{8, 1});
    CHECK(p.c.num == 5);
    CHECK(p.c.den == 2);
    CHECK(p.d.num == 2);
    CHECK(p.d.den == 1);
    CHECK(check_params(p));
    CHECK(check_params(gp_params_for(Rational{2, 1}, Rational{1, 1})));
}

TEST_CASE("pipeline stage validation")
{
    PipelineConfig cfg;
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
    cfg.stages = {"painleve", "bogus"};
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
}

TEST_CASE("command line exit codes")
{
    const std::string cli = FREUDCAPS_CLI;
    const std::string dir = (std::filesystem::temp_directory_path() / "freudcaps_cli_test").string();
    std::filesystem::create_directories(dir);
    const std::string good = dir + "/good.json";
    const std::string bad = dir + "/bad.json";
    const std::string broken = dir + "/broken.json";
    std::ofstream(good) << sample_certificate().dump(2);
    Json tampered = sample_certificate();
    tampered["constants"]["theta"] = ivl_to_json(Ivl(2));
    std::ofstream(bad) << tampered.dump(2);
    std::ofstream(broken) << "{ not json";

    CHECK(exit_code(cli + " verify " + good) == 0);
    CHECK(exit_code(cli + " verify " + bad) == 2);
    CHECK(exit_code(cli + " verify " + broken) == 3);
    CHECK(exit_code(cli + " verify " + dir + "/missing.json") == 3);
    CHECK(exit_code(cli + " --bits 8 verify " + good) == 3);
    CHECK(exit_code(cli + " gp-solve --seed nonsense") == 3);
    CHECK(exit_code(cli + " run --stages nonsense") == 3);
    CHECK(exit_code(cli) == 3);
    std::filesystem::remove_all(dir);
}
