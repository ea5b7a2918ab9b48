#include "hardcore/cayley.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <thread>

namespace hardcore {

SpherePoint cayley_ratio(const GaussianRational& lambda, int d, int n) {
    if (d < 1) throw DomainError("down-degree must be >= 1");
    if (n < 0) throw DomainError("depth must be >= 0");
    if (lambda.is_zero()) return SpherePoint(GaussianRational(0));
    SpherePoint z{GaussianRational(0)};
    for (int k = 0; k <= n; ++k) {
        if (z.infinite) {
            z = SpherePoint(GaussianRational(0)); // f(inf) = 0
            continue;
        }
        GaussianRational w = GaussianRational(1) + z.v;
        if (w.is_zero()) {
            z = SpherePoint::inf(); // f(-1) = inf
            continue;
        }
        GaussianRational p(1);
        for (int i = 0; i < d; ++i) p = p * w;
        z = SpherePoint(lambda / p);
    }
    return z;
}

bool cayley_zero_condition(const GaussianRational& lambda, int d, int n) {
    if (lambda.is_zero()) throw DomainError("zero condition needs lambda != 0");
    SpherePoint r = cayley_ratio(lambda, d, n);
    return r.is_finite() && r.v == GaussianRational(-1, 0);
}

CayleyPolynomials cayley_polynomials(int d, int n) {
    if (d < 1) throw DomainError("down-degree must be >= 1");
    if (n < 0 || n > 8) throw DomainError("cayley polynomial depth guard: n <= 8");
    Poly lam;
    lam.c = {GaussianRational(0), GaussianRational(1)};
    CayleyPolynomials cur;
    cur.z_in = lam;
    cur.z_out.c = {GaussianRational(1)};
    for (int k = 0; k < n; ++k) {
        CayleyPolynomials next;
        next.z_in = poly_mul(lam, poly_pow(cur.z_out, d));
        next.z_out = poly_pow(poly_add(cur.z_in, cur.z_out), d);
        cur = std::move(next);
    }
    return cur;
}

std::vector<CayleyZero> cayley_zeros(int d, int n, int precision_digits) {
    CayleyPolynomials pol = cayley_polynomials(d, n);
    Poly Z = pol.z();
    std::vector<CayleyZero> out;
    if (Z.degree() < 1) return out;
    for (const auto& root : aberth_roots(Z)) {
        CayleyZero cz;
        cz.z = root.z;
        cz.root_radius = root.radius;
        // exact residual at the dyadic rationalization of the root
        GaussianRational approx = dyadic_round(root.z, 320);
        GaussianRational value = poly_eval(Z, approx);
        cz.residual_bound = sqrt(to_mp(value.norm2()));
        (void)precision_digits;
        out.push_back(std::move(cz));
    }
    return out;
}

ActivityField spherical_derivative_field(double x0, double y0, double x1, double y1,
                                         int width, int height, int d, int depth,
                                         int threads) {
    if (width <= 0 || height <= 0) throw DomainError("empty raster");
    if (depth < 1) throw DomainError("depth must be >= 1");
    if (d < 1) throw DomainError("down-degree must be >= 1");
    ActivityField f;
    f.x0 = x0; f.y0 = y0; f.x1 = x1; f.y1 = y1;
    f.width = width; f.height = height;
    f.depth = depth; f.down_degree = d;
    f.sigma.assign(static_cast<size_t>(width) * height, 0.0);

    const double dx = (x1 - x0) / width, dy = (y1 - y0) / height;
    const double inf = std::numeric_limits<double>::infinity();

    auto render_row = [&](int py) {
        const double lam_im = y0 + (py + 0.5) * dy;
        for (int px = 0; px < width; ++px) {
            const std::complex<double> lam(x0 + (px + 0.5) * dx, lam_im);
            std::complex<double> r(0.0, 0.0), dr(0.0, 0.0);
            bool escaped = false;
            for (int k = 0; k < depth; ++k) {
                std::complex<double> w = 1.0 + r;
                std::complex<double> wpow = 1.0;
                for (int i = 0; i < d; ++i) wpow *= w;
                std::complex<double> rn = lam / wpow;
                std::complex<double> drn = 1.0 / wpow - (double)d * lam / (wpow * w) * dr;
                r = rn;
                dr = drn;
                if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
                    !std::isfinite(dr.real()) || !std::isfinite(dr.imag())) {
                    escaped = true;
                    break;
                }
            }
            f.at(px, py) = escaped ? inf : std::abs(dr) / (1.0 + std::norm(r));
        }
    };

    if (threads <= 1) {
        for (int py = 0; py < height; ++py) render_row(py);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        for (int t = 0; t < threads; ++t)
            workers.emplace_back([&] {
                for (int py = next.fetch_add(1); py < height; py = next.fetch_add(1))
                    render_row(py);
            });
        for (auto& w : workers) w.join();
    }
    return f;
}

std::string field_to_pgm(const ActivityField& f, double threshold) {
    std::ostringstream out;
    out << "P5\n" << f.width << " " << f.height << "\n255\n";
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double s = f.at(x, y);
            out.put(s >= threshold ? char(255) : char(0));
        }
    return out.str();
}

std::string cardioid_boundary_csv(int delta, int samples) {
    if (delta < 2) throw DomainError("Delta must be >= 2");
    if (samples < 1) throw DomainError("need at least one sample");
    std::ostringstream out;
    out << "theta,re,im\n";
    out.precision(17);
    for (int k = 0; k < samples; ++k) {
        double theta = 2.0 * M_PI * k / samples;
        std::complex<double> z = std::polar(1.0 / (delta - 1), theta);
        std::complex<double> den = 1.0;
        for (int i = 0; i < delta; ++i) den *= (1.0 - z);
        std::complex<double> lam = z / den;
        out << theta << "," << lam.real() << "," << lam.imag() << "\n";
    }
    return out.str();
}

} // namespace hardcore
