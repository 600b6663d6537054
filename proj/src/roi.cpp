#include "mineroi/roi.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

double daily_energy_cost(double power_w, double rate_usd_per_kwh) {
    if (power_w < 0.0) throw DomainError("daily_energy_cost: negative power");
    if (rate_usd_per_kwh < 0.0) throw DomainError("daily_energy_cost: negative rate");
    return power_w * 24.0 / 1000.0 * rate_usd_per_kwh;
}

double daily_machine_revenue(double machine_hashrate_ths, double network_hashrate_ths,
                             double network_revenue_usd) {
    if (!(network_hashrate_ths > 0.0)) {
        throw DomainError("daily_machine_revenue: network hashrate must be > 0");
    }
    if (machine_hashrate_ths < 0.0) {
        throw DomainError("daily_machine_revenue: negative machine hashrate");
    }
    return machine_hashrate_ths / network_hashrate_ths * network_revenue_usd;
}

int label(double roi) {
    if (!std::isfinite(roi)) throw DomainError("label: roi must be finite");
    if (roi <= 0.0) return 0;
    if (roi >= 1.0) return 2;
    return 1;
}

int days_since_halving(Date date, const std::vector<Date>& halving_dates) {
    bool found = false;
    Date best;
    for (const Date h : halving_dates) {
        if (h <= date && (!found || h > best)) {
            best = h;
            found = true;
        }
    }
    if (!found) {
        throw DomainError("days_since_halving: no halving at or before " + date.to_string());
    }
    return date - best;
}

RoiResult roi(const MachineSpec& machine, Date purchase_date, int horizon_days,
              const MarketSeries& market, const std::string& region) {
    if (horizon_days <= 0) throw DomainError("roi: horizon must be positive");

    RoiResult r;
    r.capital = machine.price_at(purchase_date);

    for (int k = 0; k < horizon_days; ++k) {
        const MarketDay& day = market.at(purchase_date + k);
        r.revenue_total += daily_machine_revenue(machine.hashrate_ths, day.network_hashrate_ths,
                                                 day.network_revenue_usd);
        r.op_cost_total += daily_energy_cost(machine.power_w, day.rate_for(region));
    }

    r.roi = (r.revenue_total - r.op_cost_total) / r.capital;
    r.label = label(r.roi);
    return r;
}

}  // namespace mineroi
