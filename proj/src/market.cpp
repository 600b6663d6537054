#include "mineroi/market.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

std::string MachineSpec::validate() const {
    if (!(hashrate_ths > 0.0)) throw DomainError("machine " + id + ": hashrate must be > 0");
    if (!(power_w > 0.0)) throw DomainError("machine " + id + ": power must be > 0");
    if (!(efficiency_jth > 0.0)) throw DomainError("machine " + id + ": efficiency must be > 0");
    for (const auto& [d, p] : price_series) {
        if (!(p > 0.0)) {
            throw DomainError("machine " + id + ": non-positive price " + std::to_string(p) +
                              " at " + d.to_string());
        }
    }
    const double implied = power_w / hashrate_ths;  // W per TH/s == J/TH
    const double rel = std::abs(implied - efficiency_jth) / efficiency_jth;
    if (rel > 0.05) {
        return "machine " + id + ": stated efficiency " + std::to_string(efficiency_jth) +
               " J/TH differs from power/hashrate " + std::to_string(implied) + " J/TH by " +
               std::to_string(rel * 100.0) + "%";
    }
    return "";
}

double MachineSpec::price_at(Date d) const {
    auto it = price_series.find(d);
    if (it == price_series.end()) {
        throw CoverageError("machine " + id + ": no price at " + d.to_string());
    }
    return it->second;
}

void MarketDay::validate() const {
    auto nonneg = [&](double v, const char* name) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw DomainError(std::string("market day ") + date.to_string() + ": " + name +
                              " must be non-negative and finite");
        }
    };
    nonneg(btc_price_usd, "btc_price_usd");
    nonneg(difficulty, "difficulty");
    nonneg(network_revenue_usd, "network_revenue_usd");
    nonneg(block_reward_btc, "block_reward_btc");
    nonneg(transaction_fees_btc, "transaction_fees_btc");
    for (const auto& [region, rate] : electricity_rates) nonneg(rate, region.c_str());
    if (!(network_hashrate_ths > 0.0)) {
        throw DomainError("market day " + date.to_string() + ": network_hashrate must be > 0");
    }
}

double MarketDay::rate_for(const std::string& region) const {
    auto it = electricity_rates.find(region);
    if (it == electricity_rates.end()) {
        throw CoverageError("no electricity rate for region '" + region + "' on " + date.to_string());
    }
    return it->second;
}

MarketSeries::MarketSeries(std::vector<MarketDay> days) : days_(std::move(days)) {
    if (days_.empty()) return;
    start_ = days_.front().date;
    for (std::size_t i = 0; i < days_.size(); ++i) {
        if (days_[i].date != start_ + static_cast<int>(i)) {
            throw CoverageError("market series is not contiguous at " + days_[i].date.to_string());
        }
    }
}

const MarketDay& MarketSeries::at(Date d) const {
    if (!covers(d)) throw CoverageError("no market data for " + d.to_string());
    return days_[static_cast<std::size_t>(d - start_)];
}

}  // namespace mineroi
