#include "cbmspares/validation.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbmspares {

namespace {

using Vec = std::vector<int>;

/// e_k of length I; e_0 and e_{-1} are the zero vector.
Vec unit(int I, int k) {
    Vec e(static_cast<std::size_t>(I), 0);
    if (k >= 1) e[static_cast<std::size_t>(k - 1)] = 1;
    return e;
}

Vec add(Vec a, const Vec& b, int sign = 1) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += sign * b[i];
    return a;
}

Vec scale(Vec a, int s) {
    for (int& v : a) v *= s;
    return a;
}

/// C^{l,n}
Vec with(Vec C, int l, int n) {
    C[static_cast<std::size_t>(l - 1)] = n;
    return C;
}

double mu(const ModelParams& p, int n) { return p.degradation.mu[static_cast<std::size_t>(n)]; }
double alpha(const ModelParams& p, int n) { return p.degradation.alpha[static_cast<std::size_t>(n)]; }

/// Machine events from conditions C, skipping machine `skip` (0 skips none).
void machine_events(std::vector<LiteralTransition>& out, const Vec& F, const Vec& P, const Vec& C, int skip,
                    const ModelParams& p) {
    const int N = p.N();
    for (int l = 1; l <= p.J(); ++l) {
        if (l == skip) continue;
        const int c = C[static_cast<std::size_t>(l - 1)];
        if (c > 0) out.push_back({{F, P, with(C, l, 0), l}, alpha(p, c) * mu(p, c)});
        if (c > 1) out.push_back({{F, P, with(C, l, c - 1), l}, (1.0 - alpha(p, c)) * mu(p, c)});
        if (c == 0) out.push_back({{F, P, with(C, l, N), l}, mu(p, 0)});
    }
}

void replenishments(std::vector<LiteralTransition>& out, const Vec& F, const Vec& P, const Vec& C,
                    const ModelParams& p) {
    for (int k = 1; k <= p.I(); ++k) {
        const int pk = P[static_cast<std::size_t>(k - 1)];
        if (pk > 0) out.push_back({{add(F, unit(p.I(), k)), add(P, unit(p.I(), k), -1), C, 0}, pk * p.gamma});
    }
}

double pipeline_rate(const Vec& P, const ModelParams& p) {
    double r = 0.0;
    for (int v : P) r += v * p.gamma;
    return r;
}

double condition_rate(const Vec& C, const ModelParams& p) {
    double r = 0.0;
    for (int c : C) r += mu(p, c);
    return r;
}

double tau(const ModelParams& p) {
    double m = 0.0;
    for (double v : p.degradation.mu) m = std::max(m, v);
    return p.gamma * p.K + p.J() * m;
}

}  // namespace

std::vector<LiteralTransition> literal_transitions(const SystemState& X, const Action& a, const ModelParams& p) {
    const int I = p.I();
    const int N = p.N();
    const Vec& F = X.F;
    const Vec& P = X.P;
    const Vec& C = X.C;
    const int j = X.j;
    std::vector<LiteralTransition> out;

    if (j == 0) {
        // Type 1: replenishment epoch, do nothing
        if (!(a == kDoNothing)) throw std::invalid_argument("literal: only do-nothing after a replenishment");
        replenishments(out, F, P, C, p);
        machine_events(out, F, P, C, 0, p);
        out.push_back({{F, P, C, 0}, tau(p) - pipeline_rate(P, p) - condition_rate(C, p)});
        return out;
    }

    const int cj = C[static_cast<std::size_t>(j - 1)];
    if (a.x >= 0) {
        if (cj >= N) throw std::invalid_argument("literal: dispatch to a machine in perfect condition");
        if (a.y >= 1 && a.z != a.x) throw std::invalid_argument("literal: dispatch relocation must target x");
        // F - e_x 1{y=-1} - e_y, P + e_x
        const Vec F1 = add(add(F, scale(unit(I, a.x), a.y == -1 ? 1 : 0), -1), unit(I, a.y), -1);
        const Vec P1 = add(P, unit(I, a.x));
        for (int v : F1)
            if (v < 0) throw std::invalid_argument("literal: dispatch from an empty warehouse");

        if (cj == 0) {
            // Type 2.1: corrective dispatch, machine j waits for repair
            replenishments(out, F1, P1, C, p);
            machine_events(out, F1, P1, C, 0, p);
            out.push_back({{F1, P1, C, 0}, tau(p) - pipeline_rate(P1, p) - condition_rate(C, p)});
            return out;
        }

        // Type 2.2: preventive dispatch, machine j restored to N
        const Vec CN = with(C, j, N);
        replenishments(out, F1, P1, CN, p);
        machine_events(out, F1, P1, CN, j, p);
        out.push_back({{F1, P1, with(C, j, N - 1), j}, (1.0 - alpha(p, N)) * mu(p, N)});
        // failure of j itself, zero under the default law; implied by the dummy rate below
        out.push_back({{F1, P1, with(C, j, 0), j}, alpha(p, N) * mu(p, N)});
        out.push_back({{F1, P1, CN, 0}, tau(p) - pipeline_rate(P1, p) - condition_rate(C, p) + mu(p, cj) - mu(p, N)});
        return out;
    }

    // Type 3: degradation or repair epoch, optional relocation y -> z
    if (cj == 0) throw std::invalid_argument("literal: a failed machine needs a dispatch");
    if (a.x != -1) throw std::invalid_argument("literal: malformed action");
    const Vec F3 = add(add(F, unit(I, a.y), -1), unit(I, a.z));
    for (int v : F3)
        if (v < 0) throw std::invalid_argument("literal: relocation from an empty warehouse");
    replenishments(out, F3, P, C, p);
    machine_events(out, F3, P, C, 0, p);
    out.push_back({{F3, P, C, 0}, tau(p) - pipeline_rate(P, p) - condition_rate(C, p)});
    return out;
}

}  // namespace cbmspares
