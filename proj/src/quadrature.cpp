#include "rbm/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace rbm {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
const double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

const double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cd value;
    double err;
    int depth;
};

Panel eval_panel(const std::function<cd(double)>& f, double a, double b, int depth,
                 long& n_eval) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cd fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    fv[7] = f(c);
    n_eval += 15;

    cd resk(0.0, 0.0), resg(0.0, 0.0);
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
    }
    resk += kWgk[7] * fv[7];
    resg = kWg[3] * fv[7];
    for (int j = 0; j < 3; ++j) {
        resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * h;
    p.err = std::abs(resk - resg) * h;
    p.depth = depth;
    return p;
}

}  // namespace

QuadResult gk_adaptive(const std::function<cd(double)>& f, double a, double b,
                       double rel_tol, double abs_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;

    auto cmp = [](const Panel& l, const Panel& r) { return l.err < r.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

    long n_eval = 0;
    heap.push(eval_panel(f, a, b, 0, n_eval));
    cd total = heap.top().value;
    double err = heap.top().err;

    while (err > std::max(rel_tol * std::abs(total), abs_tol) && !heap.empty()) {
        Panel worst = heap.top();
        if (worst.depth >= max_depth || worst.err <= 1e-300) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = eval_panel(f, worst.a, mid, worst.depth + 1, n_eval);
        Panel right = eval_panel(f, mid, worst.b, worst.depth + 1, n_eval);
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        if (n_eval > 2000000) {
            throw NumericError("adaptive quadrature exceeded evaluation budget");
        }
    }
    out.value = total;
    out.abs_err = err;
    out.n_eval = n_eval;
    return out;
}

}  // namespace rbm
