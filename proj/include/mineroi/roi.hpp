#pragma once

#include <vector>

#include "mineroi/market.hpp"

namespace mineroi {

// One-year ROI of a machine purchase and its class label.
//
// Revenue model: a machine earns its expected proportional share of the
// network's USD revenue, (machine_hashrate / network_hashrate) * network
// revenue per day, under the daily-sell assumption. Hashrate and power are
// held constant over the horizon. Revenue and cost accrue for exactly
// `horizon_days` days starting at and including the purchase date.
struct RoiResult {
    double roi = 0.0;
    double revenue_total = 0.0;  // USD over the horizon
    double op_cost_total = 0.0;  // USD over the horizon
    double capital = 0.0;        // purchase price, USD
    int label = 0;               // 0 unprofitable, 1 marginal, 2 profitable
};

// (power_w * 24 / 1000) * rate  [USD/day]. Negative inputs are domain errors.
double daily_energy_cost(double power_w, double rate_usd_per_kwh);

// (machine_hashrate / network_hashrate) * network_revenue  [USD/day].
double daily_machine_revenue(double machine_hashrate_ths, double network_hashrate_ths,
                             double network_revenue_usd);

// 0 when roi <= 0, 1 when 0 < roi < 1, 2 when roi >= 1. Rejects non-finite roi.
int label(double roi);

// Whole days since the most recent halving at or before `date`.
int days_since_halving(Date date, const std::vector<Date>& halving_dates);

RoiResult roi(const MachineSpec& machine, Date purchase_date, int horizon_days,
              const MarketSeries& market, const std::string& region);

constexpr int kDefaultHorizonDays = 365;

}  // namespace mineroi
