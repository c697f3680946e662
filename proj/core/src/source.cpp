#include "epr/source.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "csv_detail.hpp"

namespace epr {

namespace {

struct WeightedSums {
    double total_weight = 0.0;     // sum w_i
    double collected_weight = 0.0; // sum w_i a_i
};

WeightedSums validate_and_sum(const std::vector<ModePair>& modes, const Aperture& ap) {
    if (modes.empty()) {
        throw InvalidInput("mode ensemble is empty");
    }
    if (ap.acceptance.size() != modes.size()) {
        std::ostringstream msg;
        msg << "aperture length " << ap.acceptance.size() << " does not match "
            << modes.size() << " modes";
        throw InvalidInput(msg.str());
    }
    WeightedSums sums;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double w = modes[i].weight;
        const double a = ap.acceptance[i];
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidInput("mode weight must be finite and >= 0");
        }
        if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
            throw InvalidInput("aperture acceptance must lie in [0, 1]");
        }
        sums.total_weight += w;
        sums.collected_weight += w * a;
    }
    if (sums.total_weight <= 0.0) {
        throw InvalidInput("mode ensemble has zero total weight");
    }
    return sums;
}

}  // namespace

Aperture Aperture::open(std::size_t n_modes) {
    return Aperture{std::vector<double>(n_modes, 1.0)};
}

Aperture Aperture::uniform(std::size_t n_modes, double a) {
    return Aperture{std::vector<double>(n_modes, a)};
}

double collection_efficiency(const std::vector<ModePair>& modes, const Aperture& ap) {
    const WeightedSums sums = validate_and_sum(modes, ap);
    return sums.collected_weight / sums.total_weight;
}

double effective_visibility(const std::vector<ModePair>& modes, const Aperture& ap) {
    const WeightedSums sums = validate_and_sum(modes, ap);
    if (sums.collected_weight <= 0.0) {
        throw InvalidInput("degenerate selection: aperture blocks all weighted modes");
    }
    std::complex<double> phasor = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        phasor += modes[i].weight * ap.acceptance[i] * std::polar(1.0, modes[i].phase);
    }
    return std::abs(phasor) / sums.collected_weight;
}

DensityMatrix collected_state(const std::vector<ModePair>& modes, const Aperture& ap,
                              const PureTwoQubit& p) {
    const WeightedSums sums = validate_and_sum(modes, ap);
    if (sums.collected_weight <= 0.0) {
        throw InvalidInput("degenerate selection: aperture blocks all weighted modes");
    }
    PureTwoQubit::make(p.alpha, p.beta, p.phi);
    Matrix4c m = Matrix4c::Zero();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double wa = modes[i].weight * ap.acceptance[i];
        if (wa <= 0.0) continue;
        Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
        v(0) = p.alpha;
        v(3) = std::polar(p.beta, p.phi + modes[i].phase);
        m += wa * (v * v.adjoint());
    }
    return DensityMatrix::from_matrix(m / sums.collected_weight);
}

std::vector<ModePair> phase_ramp_modes(std::size_t n, double spread) {
    if (n == 0) {
        throw InvalidInput("phase ramp: need at least one mode");
    }
    if (!std::isfinite(spread)) {
        throw InvalidInput("phase ramp: spread must be finite");
    }
    std::vector<ModePair> modes(n);
    for (std::size_t j = 0; j < n; ++j) {
        modes[j] = ModePair{1.0, spread * static_cast<double>(j) / static_cast<double>(n)};
    }
    return modes;
}

namespace {

// Numeric rows of a small CSV; '#' comments and blanks skipped, a single
// leading non-numeric line tolerated as a header.
std::vector<std::pair<std::size_t, std::vector<double>>> numeric_rows(
    const std::filesystem::path& path, std::size_t n_cols) {
    std::vector<std::pair<std::size_t, std::vector<double>>> rows;
    bool header_skipped = false;
    for (const auto& [number, text] : detail::read_lines(path)) {
        if (text.empty() || text[0] == '#') continue;
        const auto fields = detail::split_fields(text);
        std::vector<double> values(fields.size());
        bool ok = fields.size() == n_cols;
        for (std::size_t i = 0; ok && i < fields.size(); ++i) {
            ok = detail::parse_double(fields[i], values[i]);
        }
        if (!ok) {
            if (!header_skipped && rows.empty()) {  // one leading header line
                header_skipped = true;
                continue;
            }
            std::ostringstream msg;
            msg << path.string() << ": line " << number << ": expected " << n_cols
                << " numeric column(s), got '" << text << "'";
            throw DataError(msg.str());
        }
        rows.emplace_back(number, std::move(values));
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": no data rows");
    }
    return rows;
}

}  // namespace

std::vector<ModePair> load_modes_csv(const std::filesystem::path& path) {
    std::vector<ModePair> modes;
    for (const auto& [number, values] : numeric_rows(path, 2)) {
        if (!(values[0] >= 0.0) || !std::isfinite(values[0])) {
            std::ostringstream msg;
            msg << path.string() << ": line " << number << ": weight must be >= 0";
            throw DataError(msg.str());
        }
        modes.push_back(ModePair{values[0], values[1]});
    }
    return modes;
}

Aperture load_aperture_csv(const std::filesystem::path& path) {
    Aperture ap;
    for (const auto& [number, values] : numeric_rows(path, 1)) {
        if (!(values[0] >= 0.0 && values[0] <= 1.0)) {
            std::ostringstream msg;
            msg << path.string() << ": line " << number
                << ": acceptance must lie in [0, 1]";
            throw DataError(msg.str());
        }
        ap.acceptance.push_back(values[0]);
    }
    return ap;
}

}  // namespace epr
