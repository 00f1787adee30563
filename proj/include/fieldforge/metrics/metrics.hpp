#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fieldforge/render/image.hpp"

namespace fieldforge {

// -10 log10(MSE) with peak value 1. Identical images give +infinity, which
// reports exclude from aggregate means. An optional per-pixel mask restricts
// the mean to unmasked pixels.
double psnr(const Image& a, const Image& b, const std::vector<bool>* mask = nullptr);

// Structural similarity: 11x11 Gaussian window (sigma 1.5), K1=0.01,
// K2=0.03, dynamic range 1, channel-averaged, mean over fully-valid window
// positions.
double ssim(const Image& a, const Image& b);

// Geometric mean of MSE = 10^(-PSNR/10) and sqrt(1 - SSIM). This is the
// two-component variant of the cross-metric "Average" score (no perceptual
// term), labeled avg2 everywhere so the numbers are not mistaken for
// three-component averages.
double average_metric(double psnr_db, double ssim_value);

struct MetricRow {
    int view_id = 0;
    double psnr = 0, ssim = 0, avg2 = 0;
};

struct MetricReport {
    std::vector<MetricRow> rows;
    double mean_psnr = 0, mean_ssim = 0, mean_avg2 = 0;
    bool mask_applied = false;

    void finalize();  // fills the means, skipping infinite psnr rows

    // CSV: header + one `view_id,psnr,ssim,avg2` row per view, dot decimal
    // separator, stable order.
    std::string to_csv() const;
    std::string summary() const;
};

}  // namespace fieldforge
