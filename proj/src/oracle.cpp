#include "hypeq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace hypeq {

std::vector<JetPoint2> sample_on_equation(const Expr& f, int n, Box box,
                                          std::uint64_t seed,
                                          const std::vector<Condition>& avoid,
                                          const VariableSpace& space) {
    (void)space;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(box.lo, box.hi);
    std::vector<JetPoint2> out;
    out.reserve(n);
    int budget = n * 200;
    while (static_cast<int>(out.size()) < n) {
        if (budget-- <= 0)
            throw PoleError("sample_on_equation: retry cap exhausted near singular loci");
        JetPoint2 j;
        j.x = dist(rng);
        j.y = dist(rng);
        j.u = dist(rng);
        j.ux = dist(rng);
        j.uy = dist(rng);
        j.uxx = dist(rng);
        j.uyy = dist(rng);
        NumericPoint pt = j.as_point();
        bool ok = true;
        for (const Condition& c : avoid) {
            double v;
            try {
                v = eval_numeric(c.expr, pt);
            } catch (const PoleError&) {
                ok = false;
                break;
            } catch (const UnboundVariableError&) {
                continue;
            }
            if (c.kind == CondKind::NonZero && std::abs(v) <= 1e-4) ok = false;
            if (c.kind == CondKind::Positive && v <= 1e-4) ok = false;
            if (!ok) break;
        }
        if (!ok) continue;
        try {
            j.uxy = eval_numeric(f, pt);
        } catch (const PoleError&) {
            continue;
        }
        j.on_equation = true;
        out.push_back(j);
    }
    return out;
}

namespace {

// total-derivative expressions precomputed once per transform
struct Prolonger {
    const ContactTransform& phi;
    Expr dxX, dyX, dxY, dyY, dxUx, dyUx, dxUy, dyUy;

    Prolonger(const ContactTransform& p, const VariableSpace& space)
        : phi(p),
          dxX(total_derivative2(p.X, Axis::X, space)),
          dyX(total_derivative2(p.X, Axis::Y, space)),
          dxY(total_derivative2(p.Y, Axis::X, space)),
          dyY(total_derivative2(p.Y, Axis::Y, space)),
          dxUx(total_derivative2(p.Ux, Axis::X, space)),
          dyUx(total_derivative2(p.Ux, Axis::Y, space)),
          dxUy(total_derivative2(p.Uy, Axis::X, space)),
          dyUy(total_derivative2(p.Uy, Axis::Y, space)) {}

    Prolong2Result run(const JetPoint2& jet, double consistency_tol) const {
        NumericPoint pt = jet.as_point();
        Prolong2Result r{};
        r.x = eval_numeric(phi.X, pt);
        r.y = eval_numeric(phi.Y, pt);
        r.u = eval_numeric(phi.U, pt);
        r.ux = eval_numeric(phi.Ux, pt);
        r.uy = eval_numeric(phi.Uy, pt);

        double a = eval_numeric(dxX, pt), b = eval_numeric(dyX, pt);
        double c = eval_numeric(dxY, pt), d = eval_numeric(dyY, pt);
        double det = a * d - b * c;
        if (std::abs(det) < 1e-10)
            throw SingularPushforwardError(
                "prolong2_numeric: total-derivative matrix is singular at the jet");

        // D Ux = (uxx~, uxy~).(DX, DY) and D Uy = (uxy~, uyy~).(DX, DY)
        double px = eval_numeric(dxUx, pt), py = eval_numeric(dyUx, pt);
        double qx = eval_numeric(dxUy, pt), qy = eval_numeric(dyUy, pt);
        r.uxx = (px * d - py * c) / det;
        r.uxy = (a * py - b * px) / det;
        r.uxy_alt = (qx * d - qy * c) / det;
        r.uyy = (a * qy - b * qx) / det;

        double scale = std::max({1.0, std::abs(r.uxy), std::abs(r.uxy_alt)});
        if (std::abs(r.uxy - r.uxy_alt) > consistency_tol * scale)
            throw ContactInconsistencyError(
                "prolong2_numeric: the two mixed-derivative computations disagree");
        return r;
    }
};

}  // namespace

Prolong2Result prolong2_numeric(const ContactTransform& phi, const JetPoint2& jet,
                                const VariableSpace& space,
                                double consistency_tol) {
    return Prolonger(phi, space).run(jet, consistency_tol);
}

VerificationReport check_admissible_numeric(const AdmissibleTransformation& t,
                                            int n, Box box, double tol,
                                            std::uint64_t seed,
                                            const VariableSpace& space,
                                            int jobs) {
    VerificationReport rep;
    rep.tol = tol;
    rep.seed = seed;
    rep.implicit_mode = !t.target_tilde.has_value();

    std::vector<Condition> avoid = t.phi.domain;
    std::vector<JetPoint2> jets =
        sample_on_equation(t.source_f, n, box, seed, avoid, space);
    rep.samples = static_cast<int>(jets.size());

    std::vector<double> residuals(jets.size(), 0.0);
    std::vector<int> status(jets.size(), 0);  // 0 ok, 1 aborted
    Prolonger prolonger(t.phi, space);

    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            try {
                Prolong2Result img = prolonger.run(jets[i], 1e-9);
                double expected;
                if (t.target_tilde) {
                    NumericPoint ipt;
                    ipt.vars = {{"tx", img.x},   {"ty", img.y},  {"tu", img.u},
                                {"tux", img.ux}, {"tuy", img.uy}};
                    expected = eval_numeric(*t.target_tilde, ipt);
                } else {
                    expected = eval_numeric(t.target_pullback, jets[i].as_point());
                }
                residuals[i] = std::abs(img.uxy - expected);
            } catch (const std::runtime_error&) {
                status[i] = 1;
            }
        }
    };
    if (jobs <= 1) {
        work(0, jets.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (jets.size() + jobs - 1) / jobs;
        for (int k = 0; k < jobs; ++k) {
            size_t b = std::min(jets.size(), k * chunk);
            size_t e = std::min(jets.size(), (k + 1) * chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    for (size_t i = 0; i < jets.size(); ++i) {
        if (status[i] == 1) {
            ++rep.aborted;
            continue;
        }
        sum += residuals[i];
        if (residuals[i] > rep.max_residual) rep.max_residual = residuals[i];
        if (residuals[i] > tol && rep.failures.size() < 8)
            rep.failures.push_back(jets[i]);
    }
    int valid = rep.samples - rep.aborted;
    rep.mean_residual = valid > 0 ? sum / valid : 0.0;
    rep.passed = rep.aborted == 0 && rep.max_residual < tol && valid > 0;
    return rep;
}

}  // namespace hypeq
