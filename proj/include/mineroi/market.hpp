#pragma once

#include <map>
#include <string>
#include <vector>

#include "mineroi/date.hpp"

namespace mineroi {

// Static attributes of one ASIC model plus its daily price series.
struct MachineSpec {
    std::string id;
    double hashrate_ths = 0.0;    // TH/s
    double power_w = 0.0;         // watts
    double efficiency_jth = 0.0;  // J/TH
    Date release_date;
    std::map<Date, double> price_series;  // date -> USD

    // Throws DomainError on violated hard invariants. Returns a warning when
    // efficiency and power/hashrate disagree by more than 5% relative
    // (flagged, not rejected); empty string otherwise.
    std::string validate() const;

    bool has_price(Date d) const { return price_series.count(d) != 0; }
    double price_at(Date d) const;  // throws CoverageError when absent
};

// One calendar day of chain, market and energy observations.
struct MarketDay {
    Date date;
    double btc_price_usd = 0.0;
    double difficulty = 0.0;
    double network_hashrate_ths = 0.0;
    double network_revenue_usd = 0.0;
    double block_reward_btc = 0.0;
    double transaction_fees_btc = 0.0;
    std::map<std::string, double> electricity_rates;  // region -> USD/kWh

    void validate() const;  // throws DomainError
    double rate_for(const std::string& region) const;  // throws CoverageError
};

// Contiguous daily market series with O(1) date lookup.
class MarketSeries {
public:
    MarketSeries() = default;
    explicit MarketSeries(std::vector<MarketDay> days);  // must be contiguous, sorted

    bool empty() const { return days_.empty(); }
    std::size_t size() const { return days_.size(); }
    Date start() const { return start_; }
    Date end() const { return start_ + static_cast<int>(days_.size()); }  // half-open
    bool covers(Date d) const { return !days_.empty() && start_ <= d && d < end(); }

    const MarketDay& at(Date d) const;  // throws CoverageError naming the date
    const std::vector<MarketDay>& days() const { return days_; }
    std::vector<MarketDay>& mutable_days() { return days_; }

private:
    Date start_;
    std::vector<MarketDay> days_;
};

}  // namespace mineroi
