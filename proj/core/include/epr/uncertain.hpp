#pragma once

namespace epr {

/// A value together with its one-sigma statistical uncertainty.
struct Uncertain {
    double value = 0.0;
    double sigma = 0.0;
};

}  // namespace epr
