#include "tangency/cases.hpp"

#include "tangency/error.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

namespace tangency {

namespace {

constexpr std::array<const char*, 4> kRoman{"I", "II", "III", "IV"};

char sign_char(int s) { return s > 0 ? '+' : '-'; }

void check_sign(int s, const char* what) {
    if (s != 1 && s != -1) fail(ErrorCode::Domain, fmt::format("{} sign must be +1 or -1, got {}", what, s));
}

int sgn(double v) { return v > 0 ? 1 : -1; }

}  // namespace

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::Q1: return "Q1";
        case Quadrant::Q2: return "Q2";
        case Quadrant::Q3: return "Q3";
        case Quadrant::Q4: return "Q4";
        case Quadrant::None: return "none";
    }
    return "none";
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::All: return "all";
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
    }
    return "all";
}

const char* to_string(Region r) { return r == Region::REps ? "R_eps" : "R_eps_minus"; }

SignCase classify(int sign_a, int sign_bc, int sign_lambda, int sign_mu) {
    check_sign(sign_a, "a");
    check_sign(sign_bc, "bc");
    check_sign(sign_lambda, "lambda");
    check_sign(sign_mu, "mu");
    const int row = (sign_a > 0 ? 0 : 2) + (sign_bc > 0 ? 0 : 1);
    SignCase out;
    out.label = fmt::format("{}_{{{}{}}}", kRoman[static_cast<std::size_t>(row)], sign_char(sign_lambda),
                            sign_char(sign_mu));
    out.sign_a = sign_a;
    out.sign_bc = sign_bc;
    out.sign_lambda = sign_lambda;
    out.sign_mu = sign_mu;
    return out;
}

SignCase classify(const ModelSystem& sys) {
    const auto& t = sys.transition;
    if (t.a == 0.0 || t.b == 0.0 || t.c == 0.0)
        fail(ErrorCode::Domain, "sign case needs a, b, c nonzero");
    if (sys.lambda() == 0.0 || sys.mu() == 0.0) fail(ErrorCode::Domain, "sign case needs nonzero eigenvalues");
    return classify(sgn(t.a), sgn(t.b) * sgn(t.c), sgn(sys.lambda()), sgn(sys.mu()));
}

std::vector<SignCase> all_cases() {
    std::vector<SignCase> out;
    for (int sa : {1, -1})
        for (int sbc : {1, -1})
            for (int sl : {1, -1})
                for (int sm : {1, -1}) out.push_back(classify(sa, sbc, sl, sm));
    return out;
}

SignCase case_from_label(const std::string& label) {
    for (const auto& c : all_cases())
        if (c.label == label) return c;
    fail(ErrorCode::Domain, fmt::format("unknown sign case label '{}'", label));
}

Adaptability adaptability(const SignCase& sc) {
    Adaptability out;
    // 3 c t^2 = -b lambda^n z0 with z0 > 0 has real roots iff bc lambda^n < 0.
    if (sc.sign_lambda > 0) {
        out.tangency_exists = sc.sign_bc < 0;
        out.n_parity = Parity::All;
    } else {
        out.tangency_exists = true;
        out.n_parity = sc.sign_bc < 0 ? Parity::Even : Parity::Odd;
    }
    if (!out.tangency_exists) return out;

    // pr_x of S_n has the sign of a lambda^n on the admissible parity.
    const int lambda_n = (sc.sign_lambda < 0 && out.n_parity == Parity::Odd) ? -1 : 1;
    out.sn_quadrant = sc.sign_a * lambda_n > 0 ? Quadrant::Q1 : Quadrant::Q2;
    out.needs_f_image = out.sn_quadrant == Quadrant::Q2 && sc.sign_mu < 0;
    out.adaptable = out.sn_quadrant == Quadrant::Q1 || out.needs_f_image;
    out.region = out.needs_f_image ? Region::REpsMinus : Region::REps;
    return out;
}

int adaptable_count() {
    int n = 0;
    for (const auto& c : all_cases()) n += adaptability(c).adaptable ? 1 : 0;
    return n;
}

bool parity_admits(Parity parity, int n) {
    switch (parity) {
        case Parity::All: return true;
        case Parity::Even: return n % 2 == 0;
        case Parity::Odd: return n % 2 != 0;
    }
    return false;
}

Rect choose_region(const SignCase& sc, double epsilon) {
    const auto ad = adaptability(sc);
    if (!ad.adaptable) fail(ErrorCode::Domain, fmt::format("case {} is not adaptable", sc.label));
    const double e3 = epsilon * epsilon * epsilon;
    if (ad.region == Region::REpsMinus) return {std::pow(1.0 + epsilon, -3), 1.0 / (1.0 + epsilon), 0.0, e3};
    return {1.0 + epsilon, std::pow(1.0 + epsilon, 3), 0.0, e3};
}

}  // namespace tangency
