#include "queuetail/errors.hpp"
#include "queuetail/rng.hpp"
#include "queuetail/sim.hpp"

#include "sim_detail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace queuetail {

namespace {

struct JsqBatches {
    std::vector<detail::BatchSeries> tail, mgf, beta, perp;
    detail::BatchSeries empty;
};

class JsqReplication {
public:
    JsqReplication(const JsqSystem& sys, const SimConfig& cfg, std::uint64_t seed)
        : sys_(sys), cfg_(cfg), rng_(seed), n_(sys.n()), counts_(64, 0) {
        counts_[0] = n_;
        h_total_.resize(256, 0.0);
        h_empty_.resize(256, 0.0);
        h_perp_.resize(256, 0.0);
        for (double x : cfg.tail_grid) {
            tail_index_.push_back(lattice_floor(x, sys.eps()) + 1);
        }
        out_.tail.resize(cfg.tail_grid.size());
        out_.mgf.resize(cfg.theta_grid.size());
        out_.beta.resize(cfg.theta_grid.size());
        out_.perp.resize(cfg.theta_grid.size());
    }

    JsqBatches run() {
        const std::int64_t warmup = cfg_.warmup_events();
        const std::int64_t batch_len = cfg_.batch_length();
        for (std::int64_t e = 0; e < warmup; ++e) {
            step();
        }
        for (std::int64_t b = 0; b < cfg_.batches; ++b) {
            for (std::int64_t e = 0; e < batch_len; ++e) {
                record();
                step();
            }
            close_batch();
        }
        return std::move(out_);
    }

private:
    void step() {
        const double lambda = sys_.lambda();
        const double mu = sys_.mu();
        const std::int64_t busy = n_ - counts_[0];
        const double total = lambda + mu * static_cast<double>(busy);
        const double u = rng_.uniform() * total;
        if (u < lambda) {
            const std::int64_t l = lo_;
            if (static_cast<std::size_t>(l + 2) >= counts_.size()) {
                counts_.resize(counts_.size() * 2, 0);
            }
            --counts_[l];
            ++counts_[l + 1];
            hi_ = std::max(hi_, l + 1);
            if (counts_[l] == 0) {
                lo_ = l + 1;
            }
            ++total_;
            return;
        }
        auto j = static_cast<std::int64_t>((u - lambda) / mu);
        j = std::min(j, busy - 1);
        std::int64_t l = std::max<std::int64_t>(lo_, 1);
        while (j >= counts_[l]) {
            j -= counts_[l];
            ++l;
        }
        --counts_[l];
        ++counts_[l - 1];
        lo_ = std::min(lo_, l - 1);
        if (l == hi_ && counts_[l] == 0) {
            hi_ = l - 1;
        }
        --total_;
    }

    void record() {
        const double weight =
            1.0 / (sys_.lambda() + sys_.mu() * static_cast<double>(n_ - counts_[0]));
        const auto s = static_cast<std::size_t>(total_);
        if (s >= h_total_.size()) {
            h_total_.resize(2 * s, 0.0);
            h_empty_.resize(2 * s, 0.0);
        }
        h_total_[s] += weight;
        h_empty_[s] += weight * static_cast<double>(counts_[0]);
        for (std::int64_t l = lo_; l <= hi_; ++l) {
            const std::int64_t c = counts_[l];
            if (c == 0) {
                continue;
            }
            const auto d = static_cast<std::size_t>(std::abs(n_ * l - total_));
            if (d >= h_perp_.size()) {
                h_perp_.resize(2 * d, 0.0);
            }
            h_perp_[d] += weight * static_cast<double>(c);
        }
    }

    void close_batch() {
        const double eps = sys_.eps();
        const double n = static_cast<double>(n_);
        double w = 0.0;
        double empty = 0.0;
        for (std::size_t s = 0; s < h_total_.size(); ++s) {
            w += h_total_[s];
            empty += h_empty_[s];
        }
        for (std::size_t k = 0; k < tail_index_.size(); ++k) {
            double mass = 0.0;
            for (auto s = static_cast<std::size_t>(tail_index_[k]); s < h_total_.size(); ++s) {
                mass += h_total_[s];
            }
            out_.tail[k].push_back(mass / w);
        }
        for (std::size_t k = 0; k < cfg_.theta_grid.size(); ++k) {
            const double theta = cfg_.theta_grid[k];
            double m = 0.0;
            double b = 0.0;
            for (std::size_t s = 0; s < h_total_.size(); ++s) {
                if (h_total_[s] == 0.0) {
                    continue;
                }
                const double g = std::exp(theta * eps * static_cast<double>(s));
                m += h_total_[s] * g;
                b += h_empty_[s] * g;
            }
            double p = 0.0;
            for (std::size_t d = 0; d < h_perp_.size(); ++d) {
                if (h_perp_[d] != 0.0) {
                    p += h_perp_[d] * std::exp(theta * static_cast<double>(d) / n);
                }
            }
            out_.mgf[k].push_back(m / w);
            out_.beta[k].push_back(sys_.mu() * b / w);
            out_.perp[k].push_back(p / (n * w));
        }
        out_.empty.push_back(empty / (n * w));
        std::fill(h_total_.begin(), h_total_.end(), 0.0);
        std::fill(h_empty_.begin(), h_empty_.end(), 0.0);
        std::fill(h_perp_.begin(), h_perp_.end(), 0.0);
    }

    const JsqSystem& sys_;
    const SimConfig& cfg_;
    SplitMix64 rng_;
    std::int64_t n_;
    std::vector<std::int64_t> counts_;
    std::int64_t lo_ = 0;
    std::int64_t hi_ = 0;
    std::int64_t total_ = 0;
    std::vector<double> h_total_, h_empty_, h_perp_;
    std::vector<std::int64_t> tail_index_;
    JsqBatches out_;
};

void append(std::vector<detail::BatchSeries>& into, const std::vector<detail::BatchSeries>& from) {
    for (std::size_t k = 0; k < into.size(); ++k) {
        into[k].insert(into[k].end(), from[k].begin(), from[k].end());
    }
}

}  // namespace

JsqStats simulate_jsq(const JsqSystem& sys, const SimConfig& cfg) {
    cfg.validate();
    std::vector<JsqBatches> reps(static_cast<std::size_t>(cfg.replications));
    detail::run_indexed(cfg.replications, worker_count(cfg.threads, cfg.replications), [&](std::int64_t i) {
        JsqReplication rep(sys, cfg, replication_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        reps[static_cast<std::size_t>(i)] = rep.run();
    });

    JsqBatches all;
    all.tail.resize(cfg.tail_grid.size());
    all.mgf.resize(cfg.theta_grid.size());
    all.beta.resize(cfg.theta_grid.size());
    all.perp.resize(cfg.theta_grid.size());
    for (const auto& r : reps) {
        append(all.tail, r.tail);
        append(all.mgf, r.mgf);
        append(all.beta, r.beta);
        append(all.perp, r.perp);
        all.empty.insert(all.empty.end(), r.empty.begin(), r.empty.end());
    }

    const double samples = static_cast<double>(cfg.batch_length() * cfg.batches * cfg.replications);
    JsqStats stats;
    stats.tail = detail::estimates_by_key(cfg.tail_grid, all.tail, true, samples);
    stats.mgf = detail::estimates_by_key(cfg.theta_grid, all.mgf, false, samples);
    stats.beta = detail::estimates_by_key(cfg.theta_grid, all.beta, false, samples);
    stats.perp_mgf = detail::estimates_by_key(cfg.theta_grid, all.perp, false, samples);
    stats.empty_frac = batch_means_probability(all.empty, samples);
    stats.events = cfg.horizon_events * cfg.replications;
    try {
        stats.ld_slope = estimate_ld_slope(stats.tail, cfg.ld_lo, cfg.ld_hi);
    } catch (const EstimationError&) {
        stats.ld_slope = LdSlope{};
    }
    return stats;
}

}  // namespace queuetail
