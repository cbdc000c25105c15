#include "tangency/cascade.hpp"

#include "tangency/error.hpp"
#include "tangency/returns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tangency {

namespace {

constexpr int kMetricNodes = 65;
constexpr double kCoverTau = 1e-6;

LogMag mul(LogMag v, double d) { return v * LogMag::from_double(d); }

}  // namespace

WordEval MapWord::eval(const ModelSystem& sys, double x, LogMag y, LogMag tx, LogMag ty) const {
    WordEval out{{x, y}, tx, ty, 0.0};
    const double log_mu = std::log(std::fabs(sys.mu()));
    const double log_lambda = std::log(std::fabs(sys.lambda()));
    for (const auto& atom : atoms) {
        if (atom.kind == MapAtom::Kind::Linear) {
            out.point.x = scale_pow(out.point.x, sys.mu(), atom.k);
            const LogMag lk = pow_logmag(sys.lambda(), atom.k);
            out.point.y = out.point.y * lk;
            out.tx = out.tx * pow_logmag(sys.mu(), atom.k);
            out.ty = out.ty * lk;
            out.log_abs_det += static_cast<double>(atom.k) * (log_mu + log_lambda);
        } else {
            const double xl = out.point.x - 1.0;
            const double yd = out.point.y.to_double();
            const Point p = phi_local(sys.transition, xl, yd);
            const Mat2 j = jacobian_local(sys.transition, xl, yd);
            const LogMag ntx = mul(out.tx, j.a11) + mul(out.ty, j.a12);
            const LogMag nty = mul(out.tx, j.a21) + mul(out.ty, j.a22);
            out.tx = ntx;
            out.ty = nty;
            out.log_abs_det += std::log(std::fabs(j.det()));
            out.point = {p.x, LogMag::from_double(p.y)};
        }
    }
    return out;
}

double MapWord::log_abs_det(const ModelSystem& sys, double x, LogMag y) const {
    return eval(sys, x, y).log_abs_det;
}

MapWord MapWord::then(MapAtom a) const {
    MapWord w = *this;
    w.atoms.push_back(a);
    return w;
}

std::string MapWord::to_string() const {
    std::string s;
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
        if (!s.empty()) s += " o ";
        s += it->kind == MapAtom::Kind::Phi ? std::string("phi") : fmt::format("f^{}", it->k);
    }
    return s.empty() ? "id" : s;
}

double frame_preimage(const ModelSystem& sys, const Box& box, double x_out, double eta) {
    const double lo0 = std::min(box.frame_lo, box.frame_hi);
    const double hi0 = std::max(box.frame_lo, box.frame_hi);
    const double span = std::max(hi0 - lo0, std::numeric_limits<double>::min());
    const LogMag y = LogMag::from_double(eta);
    auto f = [&](double X) {
        const WordEval e = box.word.eval(sys, X, y);
        return std::pair{e.point.x - x_out, e.tx.to_double()};
    };
    const double tol = 1e-13 * span + 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo0), std::fabs(hi0));
    // The bracket grows until it straddles the target.
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 40; ++it) {
        const double fl = f(lo).first, fh = f(hi).first;
        if (fl == 0.0) return lo;
        if (fh == 0.0) return hi;
        if ((fl < 0) != (fh < 0)) return safeguarded_newton(f, lo, hi, tol).root;
        const double w = hi - lo;
        lo -= w;
        hi += w;
    }
    fail(ErrorCode::Numeric, fmt::format("no frame preimage for x = {}", x_out));
}

LogMag vertical_gain(const ModelSystem& sys, const Box& box, double x_out, double eta) {
    const double X = frame_preimage(sys, box, x_out, eta);
    const WordEval e = box.word.eval(sys, X, LogMag::from_double(eta));
    if (e.tx.is_zero()) fail(ErrorCode::Numeric, "word is not invertible along x");
    return LogMag::from_log(1, e.log_abs_det - e.tx.log_abs());
}

BoxMetrics box_metrics(const ModelSystem& sys, const Box& box) {
    BoxMetrics m;
    m.W = box.width();
    const double eta_mid = 0.5 * (box.eta_bottom + box.eta_top);
    const double eta_low = 0.5 * box.eta_bottom;
    const LogMag dh = LogMag::from_double(box.eta_top - box.eta_bottom);
    const LogMag db = LogMag::from_double(box.eta_bottom).abs();
    bool first = true;
    auto visit = [&](double x) {
        const LogMag H = dh * vertical_gain(sys, box, x, eta_mid);
        const LogMag L = db * vertical_gain(sys, box, x, eta_low);
        const LogMag top = box.word.eval(sys, frame_preimage(sys, box, x, box.eta_top), LogMag::from_double(box.eta_top)).point.y;
        const LogMag bot =
            box.word.eval(sys, frame_preimage(sys, box, x, box.eta_bottom), LogMag::from_double(box.eta_bottom)).point.y;
        if (first || m.H < H) m.H = H;
        if (first || m.L < L) m.L = L;
        if (first || m.top_max < top) m.top_max = top;
        if (first || bot < m.bottom_min) m.bottom_min = bot;
        first = false;
        return H;
    };
    const auto nodes = chebyshev_nodes(box.x_lo, box.x_hi, kMetricNodes);
    std::size_t arg = 0;
    LogMag best;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const LogMag h = visit(nodes[i]);
        if (i == 0 || best < h) {
            best = h;
            arg = i;
        }
    }
    // One refinement pass around the largest height.
    const double a = nodes[arg == 0 ? 0 : arg - 1];
    const double b = nodes[std::min(arg + 1, nodes.size() - 1)];
    if (b > a)
        for (double x : chebyshev_nodes(a, b, kMetricNodes)) visit(x);
    return m;
}

bool box_in_r_eps(const ModelSystem& sys, const Box& box, const BoxMetrics& m) {
    const Rect r = sys.r_eps();
    return box.x_lo >= r.x_lo && box.x_hi <= r.x_hi && !(m.bottom_min < LogMag::from_double(r.y_lo)) &&
           m.top_max <= LogMag::from_double(r.y_hi);
}

B1Result build_b1(const ModelSystem& sys, const SnRectangle& sn) {
    B1Result out;
    out.i_n = i_n(sys, sn);
    Box& b = out.box;
    b.kind = Box::Kind::RectangleLike;
    b.k = 1;
    b.word.atoms = {MapAtom::linear(out.i_n)};
    b.frame_lo = sn.rect.x_lo;
    b.frame_hi = sn.rect.x_hi;
    b.x_lo = scale_pow(sn.rect.x_lo, sys.mu(), out.i_n);
    b.x_hi = scale_pow(sn.rect.x_hi, sys.mu(), out.i_n);
    b.eta_bottom = sn.rect.y_lo;
    b.eta_top = sn.rect.y_hi;
    out.metrics = box_metrics(sys, b);
    return out;
}

CascadeStep cascade_step(const ModelSystem& sys, const Box& box) {
    const MapWord through_phi = box.word.then(MapAtom::phi());
    const Rect ur = sys.ur();
    std::vector<double> xs;
    for (double x : {box.x_lo, box.x_hi}) {
        for (double eta : {box.eta_bottom, box.eta_top}) {
            const double X = frame_preimage(sys, box, x, eta);
            const TrackedPoint p = through_phi.eval(sys, X, LogMag::from_double(eta)).point;
            const double py = p.y.to_double();
            if (p.x < ur.x_lo || p.x > ur.x_hi || py < ur.y_lo || py > ur.y_hi)
                fail(ErrorCode::ChartExit, fmt::format("phi(B_{}) leaves U(r) at ({}, {})", box.k, p.x, py));
            xs.push_back(p.x);
        }
    }
    std::sort(xs.begin(), xs.end());
    CascadeStep st;
    st.x_minus = xs[1];
    st.x_plus = xs[2];
    if (!(st.x_plus > 0.0)) fail(ErrorCode::WrongQuadrant, "phi(B_k) does not lie right of x = 0");
    const double e = sys.epsilon();
    st.u = window_exponent(st.x_plus, sys.mu(), std::pow(1.0 + e, 2), std::pow(1.0 + e, 3));

    st.cut.kind = Box::Kind::ParallelogramLike;
    st.cut.k = box.k;
    st.cut.word = through_phi;
    st.cut.x_lo = st.x_minus;
    st.cut.x_hi = st.x_plus;
    st.cut.eta_bottom = box.eta_bottom;
    st.cut.eta_top = box.eta_top;
    st.cut.frame_lo = box.frame_lo;
    st.cut.frame_hi = box.frame_hi;
    const double eta_mid = 0.5 * (box.eta_bottom + box.eta_top);
    const double f_lo = frame_preimage(sys, st.cut, st.x_minus, eta_mid);
    const double f_hi = frame_preimage(sys, st.cut, st.x_plus, eta_mid);
    st.cut.frame_lo = f_lo;
    st.cut.frame_hi = f_hi;

    st.next = st.cut;
    st.next.kind = Box::Kind::RectangleLike;
    st.next.k = box.k + 1;
    st.next.word = through_phi.then(MapAtom::linear(st.u));
    st.next.x_lo = scale_pow(st.x_minus, sys.mu(), st.u);
    st.next.x_hi = scale_pow(st.x_plus, sys.mu(), st.u);
    return st;
}

CascadeResult run_cascade(const ModelSystem& sys, int n, bool count_arcs, int max_boxes) {
    require_positive_eigenvalues(sys);
    CascadeResult res;
    res.n = n;
    res.epsilon = sys.epsilon();
    const auto rep = validate(sys);
    for (const char* name : {"tau1_lt_inv_eps", "mu_lambda_slow"}) {
        if (!rep.passed(name)) {
            res.end_reason = fmt::format("CascadeEnd at k = 0: condition {} fails", name);
            return res;
        }
    }
    const SnRectangle sn = build_sn(sys, n);
    B1Result b1 = build_b1(sys, sn);
    res.i_n = b1.i_n;
    Box box = b1.box;
    BoxMetrics metrics = b1.metrics;
    bool inside_run = true;
    for (int k = 1; k <= max_boxes; ++k) {
        CascadeBox cb;
        cb.box = box;
        cb.metrics = metrics;
        cb.in_r_eps = box_in_r_eps(sys, box, metrics);
        if (!cb.in_r_eps) {
            res.boxes.push_back(cb);
            res.end_reason = fmt::format("CascadeEnd: B_{} leaves R_eps", k);
            break;
        }
        if (inside_run) res.k0 = k;
        if (count_arcs) {
            try {
                cb.crossing_arcs = count_crossing_arcs(sys, sn, box);
            } catch (const Error&) {
                cb.crossing_arcs = -1;
            }
            if (cb.crossing_arcs != 3) res.arcs_ok = false;
        }
        CascadeStep st;
        try {
            st = cascade_step(sys, box);
        } catch (const Error& e) {
            res.boxes.push_back(cb);
            res.end_reason = e.what();
            break;
        }
        cb.u = st.u;
        cb.x_minus = st.x_minus;
        cb.x_plus = st.x_plus;
        res.boxes.push_back(cb);
        box = st.next;
        metrics = box_metrics(sys, box);
        if (k == max_boxes) res.end_reason = "box budget exhausted";
    }
    for (int k = 1; k < res.k0; ++k) {
        const auto& a = res.boxes[static_cast<std::size_t>(k - 1)].metrics;
        const auto& b = res.boxes[static_cast<std::size_t>(k)].metrics;
        const LogMag tenth = LogMag::from_double(0.1);
        if (!(b.W >= 10.0 * a.W)) res.violations.push_back(fmt::format("W_{} < 10 W_{}", k + 1, k));
        if (!(b.H <= a.H * tenth)) res.violations.push_back(fmt::format("H_{} > H_{} / 10", k + 1, k));
        if (!(b.L <= a.L * tenth)) res.violations.push_back(fmt::format("L_{} > L_{} / 10", k + 1, k));
    }
    res.inequalities_hold = res.violations.empty();
    return res;
}

namespace {

struct ArcState {
    bool inside = false;
    int sign = 0;
    double x = 0.0;
};

}  // namespace

int count_crossing_arcs(const ModelSystem& sys, const SnRectangle& sn, const Box& box) {
    const int n = sn.n;
    const double eta_lo = std::min(box.eta_bottom, box.eta_top);
    const double eta_hi = std::max(box.eta_bottom, box.eta_top);
    const Interval win = t_window(sys);
    const double span = 0.5 * (sn.t_tilde_plus - sn.t_tilde_minus);
    const double t_lo = std::max(win.lo, sn.t_tilde_minus - span);
    const double t_hi = std::min(win.hi, sn.t_tilde_plus + span);
    const auto& tr = sys.transition;

    auto state = [&](double t) {
        const ArcJet a = arc_jet(sys, n, t);
        const Point p = phi_local(tr, t, a.y);
        const Mat2 j = jacobian_local(tr, t, a.y);
        const double dx = j.a11 + j.a12 * a.dy;
        const double dy = j.a21 + j.a22 * a.dy;
        const WordEval e = box.word.eval(sys, p.x, LogMag::from_double(p.y), LogMag::from_double(dx), LogMag::from_double(dy));
        return ArcState{p.y >= eta_lo && p.y <= eta_hi, e.tx.sign(), e.point.x};
    };
    // Last parameter on the `keep` side of a transition between a and b.
    auto refine = [&](double a, double b, auto same) {
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            (same(state(m)) ? a : b) = m;
        }
        return a;
    };
    const double lo_cover = box.x_lo + kCoverTau * box.width();
    const double hi_cover = box.x_hi - kCoverTau * box.width();

    auto count_at = [&](int samples) {
        std::vector<double> ts;
        for (int i = 0; i <= samples; ++i) ts.push_back(t_lo + (t_hi - t_lo) * i / samples);
        for (double t : {sn.t_tilde_minus, sn.t_tilde_plus})
            if (t >= t_lo && t <= t_hi) ts.push_back(t);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

        int count = 0;
        bool open = false;
        double piece_min = 0.0, piece_max = 0.0;
        auto extend = [&](double x) {
            piece_min = std::min(piece_min, x);
            piece_max = std::max(piece_max, x);
        };
        auto close = [&]() {
            if (open && piece_min <= lo_cover && piece_max >= hi_cover) ++count;
            open = false;
        };
        ArcState prev = state(ts[0]);
        if (prev.inside) {
            open = true;
            piece_min = piece_max = prev.x;
        }
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const ArcState cur = state(ts[i]);
            if (prev.inside && cur.inside && cur.sign == prev.sign) {
                extend(cur.x);
            } else if (prev.inside && !cur.inside) {
                const double tb = refine(ts[i - 1], ts[i], [](const ArcState& s) { return s.inside; });
                extend(state(tb).x);
                close();
            } else if (!prev.inside && cur.inside) {
                const double tb = refine(ts[i], ts[i - 1], [](const ArcState& s) { return s.inside; });
                open = true;
                piece_min = piece_max = state(tb).x;
                extend(cur.x);
            } else if (prev.inside && cur.inside) {
                const int s0 = prev.sign;
                const double tb = refine(ts[i - 1], ts[i], [s0](const ArcState& s) { return s.inside && s.sign == s0; });
                const double x_turn = state(tb).x;
                extend(x_turn);
                close();
                open = true;
                piece_min = piece_max = x_turn;
                extend(cur.x);
            }
            prev = cur;
        }
        close();
        return count;
    };

    int last = -1;
    for (int samples : {256, 512, 1024, 2048}) {
        const int c = count_at(samples);
        if (c == last) return c;
        last = c;
    }
    fail(ErrorCode::Inconclusive, "arc count did not stabilise; refine the sampling");
}

}  // namespace tangency
