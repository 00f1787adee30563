#include "fieldforge/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

namespace {

void require_comparable(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw ShapeError("metrics: image sizes differ, " + std::to_string(a.width) + "x" +
                         std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                         std::to_string(b.height));
}

// Locale-independent formatting for CSV output.
std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2 with L = 1
constexpr double kC2 = 0.03 * 0.03;

const double* gaussian_window() {
    static double w[kWin * kWin];
    static bool ready = false;
    if (!ready) {
        double total = 0;
        for (int y = 0; y < kWin; ++y)
            for (int x = 0; x < kWin; ++x) {
                const double dx = x - kWin / 2, dy = y - kWin / 2;
                w[y * kWin + x] = std::exp(-(dx * dx + dy * dy) / (2 * kSigma * kSigma));
                total += w[y * kWin + x];
            }
        for (double& v : w) v /= total;
        ready = true;
    }
    return w;
}

}  // namespace

double psnr(const Image& a, const Image& b, const std::vector<bool>* mask) {
    require_comparable(a, b);
    if (mask && mask->size() != static_cast<std::size_t>(a.width) * a.height)
        throw ShapeError("psnr: mask size does not match image");
    double se = 0;
    std::int64_t n = 0;
    for (int j = 0; j < a.height; ++j)
        for (int i = 0; i < a.width; ++i) {
            if (mask && !(*mask)[static_cast<std::size_t>(j) * a.width + i]) continue;
            const float* pa = a.pixel(i, j);
            const float* pb = b.pixel(i, j);
            for (int c = 0; c < 3; ++c) {
                const double d = double(pa[c]) - double(pb[c]);
                se += d * d;
            }
            n += 3;
        }
    if (n == 0) throw ConfigError("psnr: mask excludes every pixel");
    const double mse = se / static_cast<double>(n);
    if (mse == 0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(mse);
}

double ssim(const Image& a, const Image& b) {
    require_comparable(a, b);
    if (a.width < kWin || a.height < kWin)
        throw ConfigError("ssim: image smaller than the 11x11 window");
    const double* w = gaussian_window();
    double total = 0;
    std::int64_t count = 0;
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j + kWin <= a.height; ++j)
            for (int i = 0; i + kWin <= a.width; ++i) {
                double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
                for (int y = 0; y < kWin; ++y)
                    for (int x = 0; x < kWin; ++x) {
                        const double wv = w[y * kWin + x];
                        const double va = a.pixel(i + x, j + y)[c];
                        const double vb = b.pixel(i + x, j + y)[c];
                        mu_a += wv * va;
                        mu_b += wv * vb;
                        aa += wv * va * va;
                        bb += wv * vb * vb;
                        ab += wv * va * vb;
                    }
                const double var_a = aa - mu_a * mu_a;
                const double var_b = bb - mu_b * mu_b;
                const double cov = ab - mu_a * mu_b;
                const double num = (2 * mu_a * mu_b + kC1) * (2 * cov + kC2);
                const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
                total += num / den;
                ++count;
            }
    }
    return total / static_cast<double>(count);
}

double average_metric(double psnr_db, double ssim_value) {
    const double mse = std::pow(10.0, -psnr_db / 10.0);
    const double s = 1.0 - ssim_value;
    if (mse < 0 || s < 0)
        throw NumericError("average_metric: components must be non-negative");
    return std::sqrt(mse * std::sqrt(s));
}

void MetricReport::finalize() {
    double sp = 0, ss = 0, sa = 0;
    std::int64_t np = 0;
    for (const auto& r : rows) {
        if (std::isfinite(r.psnr)) {
            sp += r.psnr;
            sa += r.avg2;
            ++np;
        }
        ss += r.ssim;
    }
    mean_psnr = np ? sp / static_cast<double>(np) : std::numeric_limits<double>::infinity();
    mean_ssim = rows.empty() ? 0 : ss / static_cast<double>(rows.size());
    mean_avg2 = np ? sa / static_cast<double>(np) : 0;
}

std::string MetricReport::to_csv() const {
    std::ostringstream os;
    os << "view_id,psnr,ssim,avg2\n";
    for (const auto& r : rows)
        os << r.view_id << "," << fmt(r.psnr) << "," << fmt(r.ssim) << "," << fmt(r.avg2) << "\n";
    return os.str();
}

std::string MetricReport::summary() const {
    std::ostringstream os;
    os << "views: " << rows.size() << "  mean psnr: " << fmt(mean_psnr)
       << " dB  mean ssim: " << fmt(mean_ssim) << "  mean avg2: " << fmt(mean_avg2);
    if (mask_applied) os << "  (masked psnr)";
    return os.str();
}

}  // namespace fieldforge
