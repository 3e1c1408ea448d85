#include "freudcaps/certificate.hpp"

#include "freudcaps/embed.hpp"
#include "freudcaps/gpcap.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fc {

namespace {

class Checker {
public:
    explicit Checker(VerifyResult& r) : r_(r) {}
    // Records the first failing check; later checks are still counted.
    void operator()(bool ok, const std::string& name)
    {
        ++r_.checks;
        if (!ok && r_.ok) {
            r_.ok = false;
            r_.culprit = name;
        }
    }

private:
    VerifyResult& r_;
};

bool overlaps(const Ivl& a, const Ivl& b) { return intersect(a, b).has_value(); }

// a <= b is not refuted: lo(a) <= hi(b).
bool possibly_le(const Ivl& a, const Ivl& b) { return !certainly_gt(a, b); }

Ivl field(const Json& obj, const char* key) { return ivl_from_json(obj.at(key)); }

void check_flux(const Json& k, Checker& check);

void check_constants(const Json& cert, Checker& check)
{
    const Json& k = cert.at("constants");
    if (!k.contains("C_alpha") || !k.contains("theta")) {
        check_flux(k, check);
        return;
    }
    const Ivl C_alpha = field(k, "C_alpha");
    const Ivl theta = field(k, "theta");
    check(C_alpha.positive(), "C_alpha > 0");
    check(certainly_lt(theta, Ivl(1)), "theta < 1");
    check(theta.positive(), "theta > 0");
    if (cert.contains("params") && cert["params"].contains("c_plus")) {
        const Ivl cp = Ivl::parse(cert["params"]["c_plus"].get<std::string>());
        check(overlaps(C_alpha, alpha_growth_constant(cp)), "C_alpha = 3^{1/4} / sqrt(c+)");
        if (cert.contains("thresholds"))
            check(overlaps(theta, beta_ratio_constant(cp, cert["thresholds"].at("N").get<long>())), "theta closed form");
    }
    if (k.contains("C")) {
        const Ivl C12 = field(k, "C12");
        const Ivl C22 = field(k, "C22");
        const Ivl C = field(k, "C");
        check(overlaps(C22, Ivl(1) / (C_alpha * (Ivl(1) - theta))), "C22 = 1 / (C_alpha (1 - theta))");
        check(possibly_le(sqrt(sqr(C12) + sqr(C22)), C), "C >= sqrt(C12^2 + C22^2)");
    }
    check_flux(k, check);
}

void check_flux(const Json& k, Checker& check)
{
    if (k.contains("C_P")) {
        const Ivl cp = field(k, "C_P");
        check(cp.positive(), "C_P > 0");
    }
    if (k.contains("c") && k.contains("Z") && k.contains("C_P")) {
        const Ivl c = field(k, "c");
        const Ivl Z = field(k, "Z");
        const Ivl cpm = max(Ivl(1), Ivl(field(k, "C_P").hi()));
        if (k.contains("linf_const"))
            check(possibly_le(sqrt(Z * (c + Ivl(1))) * root4(cpm), field(k, "linf_const")),
                  "linf_const >= sqrt(Z (c + 1)) max(1, C_P)^{1/4}");
        if (k.contains("h1R_const"))
            check(possibly_le(sqrt(Z) * sqrt(cpm + sqr(c + Ivl(1)) / Ivl(4)), field(k, "h1R_const")),
                  "h1R_const >= sqrt(Z) (max(1, C_P) + (c + 1)^2 / 4)^{1/2}");
    }
}

void check_gp(const Json& cert, Checker& check)
{
    ProofBounds b;
    b.Y = field(cert, "Y");
    b.Z11 = field(cert, "Z11");
    b.Z12 = field(cert, "Z12");
    b.Z21 = field(cert, "Z21");
    b.Z22 = field(cert, "Z22");
    b.Z1 = field(cert, "Z1");
    b.Z2 = field(cert, "Z2");
    b.Z3 = field(cert, "Z3");
    for (const Ivl* x : {&b.Y, &b.Z11, &b.Z12, &b.Z21, &b.Z22, &b.Z1, &b.Z2, &b.Z3}) check(x->nonneg(), "bounds are nonnegative");
    const Ivl S = sqr(b.Z11) + sqr(b.Z12) + sqr(b.Z21) + sqr(b.Z22);
    const Ivl det = sqr(b.Z11 * b.Z22 - b.Z12 * b.Z21);
    const Ivl lam = (S + sqrt(max(sqr(S) - Ivl(4) * det, Ivl(0)))) / Ivl(2);
    check(possibly_le(sqrt(lam), b.Z1), "Z1 >= |[[Z11, Z12], [Z21, Z22]]|");
    if (cert.contains("constants")) {
        const Json& k = cert["constants"];
        if (k.contains("c") && k.contains("Z") && k.contains("C_P")) {
            const Ivl cpm = max(Ivl(1), Ivl(field(k, "C_P").lo()));
            const Ivl z3 = Ivl(6) * field(k, "Z") * (field(k, "c") + Ivl(1)) * sqr(cpm) * sqrt(cpm);
            check(possibly_le(Ivl(z3.lo()), b.Z3), "Z3 >= 6 Z (c + 1) max(1, C_P)^{5/2}");
        }
    }
    const bool success = cert.at("success").get<bool>();
    if (!success) return;
    const Ivl delta = field(cert, "delta");
    const Ivl dlo = field(cert, "delta_lo");
    const Ivl dhi = field(cert, "delta_hi");
    check(certainly_lt(b.Z1, Ivl(1)), "Z1 < 1");
    check(certainly_lt(radii_Q(b, delta), Ivl(0)), "Q(delta) < 0");
    check(certainly_lt(radii_R(b, delta), Ivl(0)), "R(delta) < 0");
    check(certainly_lt(b.Z1 + b.Z2 * delta + b.Z3 * sqr(delta) / Ivl(2), Ivl(1)), "Z1 + Z2 delta + Z3 delta^2 / 2 < 1");
    check(possibly_le(Ivl(dlo.lo()), delta) && possibly_le(delta, Ivl(dhi.hi())), "delta_lo <= delta <= delta_hi");
    if (cert.contains("constants") && cert["constants"].contains("h1R_const") && cert.contains("h1R_bound"))
        check(possibly_le(field(cert["constants"], "h1R_const") * delta, field(cert, "h1R_bound")),
              "h1R_bound >= h1R_const delta");
    if (!cert.contains("positivity") || !cert.contains("params")) return;
    const Json& pos = cert["positivity"];
    if (pos.at("verdict").get<std::string>() != "positive") return;
    const Json& p = cert["params"];
    auto rat = [&](const char* key) {
        const Rational r = parse_rational(p.at(key).get<std::string>());
        return Ivl::rational(r.num, r.den);
    };
    const Ivl kappa = rat("kappa"), c = rat("c"), d = rat("d"), omega = rat("omega");
    const Ivl y = sqr(Ivl(field(pos, "r0").lo()));
    const Ivl g = pow(y, 3) / Ivl(4) - kappa * sqr(y) / Ivl(2) + c * y + d - omega;
    const Ivl g1 = Ivl(3) * sqr(y) / Ivl(4) - kappa * y + c;
    const Ivl g2 = Ivl(3) * y / Ivl(2) - kappa;
    check(g.positive() && g1.positive() && g2.positive(), "W - omega > 0 for |x| >= r0");
    if (cert.contains("constants") && cert["constants"].contains("linf_const"))
        check(possibly_le(field(cert["constants"], "linf_const") * delta, field(pos, "sup_error")),
              "sup_error >= linf_const delta");
}

}  // namespace

Json ivl_to_json(const Ivl& x, int digits) { return Json{{"lo", x.lo_str(digits)}, {"hi", x.hi_str(digits)}}; }

Ivl ivl_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("lo") || !j.contains("hi") || !j["lo"].is_string() || !j["hi"].is_string())
        throw std::invalid_argument("interval must be an object with string fields lo and hi");
    return Ivl::parse(j["lo"].get<std::string>(), j["hi"].get<std::string>());
}

VerifyResult verify_certificate(const Json& cert)
{
    if (!cert.is_object()) throw std::invalid_argument("certificate must be a JSON object");
    VerifyResult r;
    Checker check(r);
    const long bits = cert.value("precision_bits", 256L);
    PrecisionGuard g(bits);
    try {
        check(cert.value("version", std::string()) == kCertificateVersion, "version");
        if (cert.contains("params") && cert["params"].contains("omega")) {
            const Json& p = cert["params"];
            GPParams gp;
            gp.kappa = parse_rational(p.at("kappa").get<std::string>());
            gp.c = parse_rational(p.at("c").get<std::string>());
            gp.d = parse_rational(p.at("d").get<std::string>());
            gp.omega = parse_rational(p.at("omega").get<std::string>());
            check(check_params(gp), "6 + 4c - kappa^2 = 0 and 2d = kappa");
        }
        if (cert.contains("thresholds")) {
            const Json& t = cert["thresholds"];
            check(t.at("N").get<long>() <= t.at("N2").get<long>() + 1, "N <= N2 + 1");
            check(t.at("N2").get<long>() <= t.at("N1").get<long>(), "N2 <= N1");
        }
        if (cert.contains("constants")) check_constants(cert, check);
        if (cert.contains("poincare")) {
            const Json& p = cert["poincare"];
            check(possibly_le(Ivl(field(p, "lower").lo()), field(p, "upper")), "C_P lower <= upper");
        }
        if (cert.contains("Y")) check_gp(cert, check);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
    }
    return r;
}

VerifyResult verify_certificate_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json cert;
    try {
        cert = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    return verify_certificate(cert);
}

void merge_json(Json& into, const Json& update)
{
    for (auto it = update.begin(); it != update.end(); ++it) {
        if (into.contains(it.key()) && into[it.key()].is_object() && it.value().is_object())
            into[it.key()].update(it.value());
        else
            into[it.key()] = it.value();
    }
}

Json merge_into_file(const std::string& path, const Json& update)
{
    Json cert = Json::object();
    {
        std::ifstream in(path);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            if (!ss.str().empty()) cert = Json::parse(ss.str());
            if (!cert.is_object()) throw std::invalid_argument(path + " does not hold a JSON object");
        }
    }
    merge_json(cert, update);
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << cert.dump(2) << '\n';
    return cert;
}

}  // namespace fc
