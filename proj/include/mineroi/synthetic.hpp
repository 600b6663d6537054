#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>

#include "mineroi/dataset.hpp"
#include "mineroi/roi.hpp"

namespace mineroi::synth {

// One market regime: a date range with a daily drift and volatility applied
// to the price-like random walks.
struct RegimeSegment {
    DateRange range;
    double drift = 0.0;       // per-day log drift of btc price / revenue
    double volatility = 0.0;  // per-day log stddev
};

struct ScenarioConfig {
    int n_machines = 3;
    DateRange range;
    std::vector<RegimeSegment> regimes;  // contiguous, non-overlapping, covering `range`
    double electricity_rate = 0.05;      // USD/kWh
    std::string region = "synthia";
    std::vector<Date> halving_dates;
    std::uint64_t seed = 1;
    double machine_price_scale = 1.0;  // scales all machine price series

    void validate() const;
};

struct Scenario {
    std::vector<MachineSpec> machines;
    MarketSeries market;
};

// Deterministic per seed: the same config always yields the same series.
Scenario generate(const ScenarioConfig& config);

// Writes machines.csv, machine_specs.csv, chain.csv and energy.csv in the
// exact schemas the ingestion reads.
void write_csvs(const Scenario& scenario, const ScenarioConfig& config,
                const std::filesystem::path& dir);

// --- independent oracles -------------------------------------------------
// Naive scalar re-derivations kept free of any code shared with the
// optimized paths; they are the ground truth the acceptance suite checks
// against.

// Day-by-day ROI accumulator.
RoiResult oracle_roi(const MachineSpec& machine, Date purchase_date, int horizon_days,
                     const MarketSeries& market, const std::string& region);

// O(L^2) discrete Fourier transform of a real series, all L bins.
std::vector<std::complex<double>> oracle_dft(const std::vector<double>& x);
// O(L^2) inverse transform, returning the complex series.
std::vector<std::complex<double>> oracle_idft(const std::vector<std::complex<double>>& spectrum);
// Spectral filter with one weight per non-negative bin: transform, scale the
// non-negative bins, mirror the conjugate half, inverse, real part.
std::vector<double> oracle_spectral_filter(const std::vector<double>& x,
                                           const std::vector<std::complex<double>>& bin_weights);

// --- planted classification data ----------------------------------------

// Three Gaussian populations around class-specific sign patterns, margin wide
// enough that a nearest-class-mean readout is near-perfect. End dates are
// interleaved across classes so chronological splits stay balanced.
std::vector<WindowSample> separable_dataset(int lookback, int features, int n_per_class,
                                            std::uint64_t seed);

}  // namespace mineroi::synth
