#pragma once

#include "tangency/model.hpp"

#include <string>
#include <vector>

namespace tangency {

enum class Quadrant { Q1, Q2, Q3, Q4, None };
enum class Parity { All, Even, Odd };
enum class Region { REps, REpsMinus };

const char* to_string(Quadrant q);
const char* to_string(Parity p);
const char* to_string(Region r);

/// One row of the sixteen-case sign table. I = (a+, bc+), II = (a+, bc-),
/// III = (a-, bc+), IV = (a-, bc-); the first subscript is the sign of
/// lambda and the second the sign of mu.
struct SignCase {
    std::string label;  // e.g. "II_{++}"
    int sign_a = 1;
    int sign_bc = 1;
    int sign_lambda = 1;
    int sign_mu = 1;

    friend bool operator==(const SignCase&, const SignCase&) = default;
};

/// Arguments must each be +1 or -1; anything else is a Domain error.
SignCase classify(int sign_a, int sign_bc, int sign_lambda, int sign_mu);
/// Sign of bc is sign(b) * sign(c); b = 0 or c = 0 is a Domain error.
SignCase classify(const ModelSystem& sys);
/// Inverse of the label; throws Domain for an unknown label.
SignCase case_from_label(const std::string& label);

/// All sixteen rows in table order.
std::vector<SignCase> all_cases();

struct Adaptability {
    bool adaptable = false;
    /// False when 3 c t^2 = -b lambda^n z0 has no real solution for any n.
    bool tangency_exists = false;
    Parity n_parity = Parity::All;
    Quadrant sn_quadrant = Quadrant::None;
    bool needs_f_image = false;
    Region region = Region::REps;
};

Adaptability adaptability(const SignCase& sign_case);

/// Number of adaptable rows among the sixteen.
int adaptable_count();

bool parity_admits(Parity parity, int n);

/// R_eps when S_n already lies in Q1, R_eps^- when the construction goes
/// through f(S_n). Domain error for non-adaptable cases.
Rect choose_region(const SignCase& sign_case, double epsilon);

}  // namespace tangency
