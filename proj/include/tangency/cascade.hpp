#pragma once

#include "tangency/model.hpp"
#include "tangency/numeric.hpp"
#include "tangency/rects.hpp"

#include <string>
#include <vector>

namespace tangency {

/// One atom of a composition: f^k on the linear chart, or the transition phi.
struct MapAtom {
    enum class Kind { Linear, Phi };
    Kind kind = Kind::Linear;
    long k = 0;

    static MapAtom linear(long k) { return {Kind::Linear, k}; }
    static MapAtom phi() { return {Kind::Phi, 0}; }
};

/// Point whose height may lie far below the double range.
struct TrackedPoint {
    double x = 0.0;
    LogMag y;
};

/// Image of a point together with the image of one tangent and log|det|.
struct WordEval {
    TrackedPoint point;
    LogMag tx;  // x component of the pushed tangent
    LogMag ty;  // y component of the pushed tangent
    double log_abs_det = 0.0;
};

/// Composition applied left to right: atoms[0] acts first.
struct MapWord {
    std::vector<MapAtom> atoms;

    /// Pushes (x, y) and the tangent (tx, ty), default e_x.
    WordEval eval(const ModelSystem& sys, double x, LogMag y, LogMag tx = LogMag::from_double(1.0),
                  LogMag ty = LogMag::zero()) const;
    /// Product of the atom determinants at the successive images, as a log.
    double log_abs_det(const ModelSystem& sys, double x, LogMag y) const;
    MapWord then(MapAtom a) const;
    std::string to_string() const;
};

/// Box of the cascade. The word carries the S_n frame (x, eta) to the box;
/// the bottom and top edges are the images of eta = eta_bottom and
/// eta = eta_top, and the local unstable piece delta is the image of eta = 0.
struct Box {
    enum class Kind { RectangleLike, ParallelogramLike };
    Kind kind = Kind::RectangleLike;
    int k = 1;
    double x_lo = 0.0;
    double x_hi = 0.0;
    MapWord word;
    double eta_bottom = 0.0;
    double eta_top = 0.0;
    /// Frame abscissa range that the word maps onto [x_lo, x_hi].
    double frame_lo = 0.0;
    double frame_hi = 0.0;

    double width() const { return x_hi - x_lo; }
};

struct BoxMetrics {
    double W = 0.0;
    LogMag H;  // max vertical extent between bottom and top
    LogMag L;  // max vertical distance from delta to the bottom edge
    LogMag top_max;
    LogMag bottom_min;
};

/// Frame abscissa mapped by the word to x_out at height eta (monotone solve).
double frame_preimage(const ModelSystem& sys, const Box& box, double x_out, double eta);

/// Vertical gain |det DM| / |d out_x / d in_x| at output abscissa x_out.
LogMag vertical_gain(const ModelSystem& sys, const Box& box, double x_out, double eta);

BoxMetrics box_metrics(const ModelSystem& sys, const Box& box);

/// Whether the box lies inside R_eps.
bool box_in_r_eps(const ModelSystem& sys, const Box& box, const BoxMetrics& m);

struct B1Result {
    Box box;
    BoxMetrics metrics;
    long i_n = 0;
};

B1Result build_b1(const ModelSystem& sys, const SnRectangle& sn);

struct CascadeStep {
    Box cut;
    double x_minus = 0.0;
    double x_plus = 0.0;
    long u = 0;
    Box next;
};

/// ChartExit when phi(box) leaves U(r).
CascadeStep cascade_step(const ModelSystem& sys, const Box& box);

struct CascadeBox {
    Box box;
    BoxMetrics metrics;
    bool in_r_eps = false;
    long u = 0;         // exponent of the step that leaves this box; 0 for the last
    double x_minus = 0.0;
    double x_plus = 0.0;
    int crossing_arcs = -1;
};

struct CascadeResult {
    int n = 0;
    double epsilon = 0.0;
    long i_n = 0;
    std::vector<CascadeBox> boxes;  // B_1 ... B_k0, then the first box outside R_eps if any
    int k0 = 0;
    std::string end_reason;
    bool inequalities_hold = true;
    std::vector<std::string> violations;
    bool arcs_ok = true;
};

/// Runs until the next box leaves R_eps (CascadeEnd). Returns k0 = 0 with an
/// end reason when the slow conditions fail.
CascadeResult run_cascade(const ModelSystem& sys, int n, bool count_arcs = true, int max_boxes = 12);

/// Number of monotone pieces of the word image of phi(alpha_n) that cross the
/// box from its left side to its right side. Inconclusive when successive
/// refinements disagree.
int count_crossing_arcs(const ModelSystem& sys, const SnRectangle& sn, const Box& box);

}  // namespace tangency
