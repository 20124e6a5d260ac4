#include "queuetail/errors.hpp"
#include "queuetail/rng.hpp"
#include "queuetail/sim.hpp"

#include "sim_detail.hpp"

#include <algorithm>
#include <cmath>

namespace queuetail {

namespace {

class PmfSampler {
public:
    explicit PmfSampler(const BoundedPmf& pmf) : values_(pmf.values().begin(), pmf.values().end()) {
        double acc = 0.0;
        for (double p : pmf.probs()) {
            acc += p;
            cdf_.push_back(acc);
        }
        cdf_.back() = 1.0;
    }

    std::int64_t operator()(double u) const noexcept {
        std::size_t i = 0;
        while (u >= cdf_[i]) {
            ++i;
        }
        return values_[i];
    }

private:
    std::vector<std::int64_t> values_;
    std::vector<double> cdf_;
};

struct SsqBatches {
    std::vector<detail::BatchSeries> tail, mgf, neg_u;
    detail::BatchSeries mean_u;
};

void bump(std::vector<double>& h, std::int64_t k) {
    const auto i = static_cast<std::size_t>(k);
    if (i >= h.size()) {
        h.resize(2 * i + 1, 0.0);
    }
    h[i] += 1.0;
}

SsqBatches run_replication(const SsqSystem& sys, const SimConfig& cfg, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const PmfSampler arrival(sys.arrival());
    const PmfSampler service(sys.service());
    const double eps = sys.eps();
    std::vector<std::int64_t> tail_index;
    for (double x : cfg.tail_grid) {
        tail_index.push_back(lattice_floor(x, eps) + 1);
    }

    SsqBatches out;
    out.tail.resize(cfg.tail_grid.size());
    out.mgf.resize(cfg.theta_grid.size());
    out.neg_u.resize(cfg.theta_grid.size());
    std::vector<double> hq(64, 0.0);
    std::vector<double> hu(16, 0.0);

    std::int64_t q = 0;
    auto advance = [&](bool keep) {
        const std::int64_t a = arrival(rng.uniform());
        const std::int64_t s = service(rng.uniform());
        if (keep) {
            bump(hq, q);
        }
        const std::int64_t next = q + a - s;
        const std::int64_t u = next < 0 ? -next : 0;
        q = next < 0 ? 0 : next;
        if (keep) {
            bump(hu, u);
        }
    };

    const std::int64_t warmup = cfg.warmup_events();
    const std::int64_t len = cfg.batch_length();
    for (std::int64_t t = 0; t < warmup; ++t) {
        advance(false);
    }
    for (std::int64_t b = 0; b < cfg.batches; ++b) {
        for (std::int64_t t = 0; t < len; ++t) {
            advance(true);
        }
        const double slots = static_cast<double>(len);
        for (std::size_t k = 0; k < tail_index.size(); ++k) {
            double mass = 0.0;
            for (auto i = static_cast<std::size_t>(tail_index[k]); i < hq.size(); ++i) {
                mass += hq[i];
            }
            out.tail[k].push_back(mass / slots);
        }
        for (std::size_t k = 0; k < cfg.theta_grid.size(); ++k) {
            const double theta = cfg.theta_grid[k];
            double m = 0.0;
            for (std::size_t i = 0; i < hq.size(); ++i) {
                if (hq[i] != 0.0) {
                    m += hq[i] * std::exp(theta * eps * static_cast<double>(i));
                }
            }
            double g = 0.0;
            for (std::size_t i = 0; i < hu.size(); ++i) {
                if (hu[i] != 0.0) {
                    g += hu[i] * std::exp(-theta * eps * static_cast<double>(i));
                }
            }
            out.mgf[k].push_back(m / slots);
            out.neg_u[k].push_back(g / slots);
        }
        double mu = 0.0;
        for (std::size_t i = 0; i < hu.size(); ++i) {
            mu += hu[i] * static_cast<double>(i);
        }
        out.mean_u.push_back(mu / slots);
        std::fill(hq.begin(), hq.end(), 0.0);
        std::fill(hu.begin(), hu.end(), 0.0);
    }
    return out;
}

void append(std::vector<detail::BatchSeries>& into, const std::vector<detail::BatchSeries>& from) {
    for (std::size_t k = 0; k < into.size(); ++k) {
        into[k].insert(into[k].end(), from[k].begin(), from[k].end());
    }
}

}  // namespace

SsqStats simulate_ssq(const SsqSystem& sys, const SimConfig& cfg) {
    cfg.validate();
    std::vector<SsqBatches> reps(static_cast<std::size_t>(cfg.replications));
    detail::run_indexed(cfg.replications, worker_count(cfg.threads, cfg.replications), [&](std::int64_t i) {
        reps[static_cast<std::size_t>(i)] =
            run_replication(sys, cfg, replication_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    });

    SsqBatches all;
    all.tail.resize(cfg.tail_grid.size());
    all.mgf.resize(cfg.theta_grid.size());
    all.neg_u.resize(cfg.theta_grid.size());
    for (const auto& r : reps) {
        append(all.tail, r.tail);
        append(all.mgf, r.mgf);
        append(all.neg_u, r.neg_u);
        all.mean_u.insert(all.mean_u.end(), r.mean_u.begin(), r.mean_u.end());
    }

    const double samples = static_cast<double>(cfg.batch_length() * cfg.batches * cfg.replications);
    SsqStats stats;
    stats.tail = detail::estimates_by_key(cfg.tail_grid, all.tail, true, samples);
    stats.mgf = detail::estimates_by_key(cfg.theta_grid, all.mgf, false, samples);
    stats.e_neg_theta_u = detail::estimates_by_key(cfg.theta_grid, all.neg_u, false, samples);
    stats.mean_u = batch_means_estimate(all.mean_u);
    stats.slots = cfg.horizon_events * cfg.replications;
    return stats;
}

}  // namespace queuetail
