#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "badgeproc/types.hpp"

namespace badgeproc {

// Badge proximity kernel g_omega(x, tau): bounded lift as progress x
// approaches the threshold tau. Always in [0, 1].
inline double badge_kernel(KernelKind kind, double x, double tau, double omega) {
    if (!std::isfinite(x) || !std::isfinite(tau) || !std::isfinite(omega)) {
        throw std::invalid_argument("badge_kernel: inputs must be finite");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("badge_kernel: bandwidth must be positive");
    }
    switch (kind) {
        case KernelKind::Gaussian: {
            const double z = (tau - x) / (2.0 * omega);
            return std::exp(-z * z);
        }
        case KernelKind::Exponential:
            return tau >= x ? std::exp(-omega * (tau - x)) : 0.0;
    }
    throw std::invalid_argument("badge_kernel: unknown kernel kind");
}

// Exponential decay of a question's influence on later answers.
inline double time_decay(double t_i, double t_j, double w) {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("time_decay: decay rate must be positive");
    }
    if (!(t_j >= t_i)) {
        throw std::invalid_argument("time_decay: t_j must not precede t_i");
    }
    return std::exp(-w * (t_j - t_i));
}

namespace detail {

// Distinct day buckets floor(time / day_length) among the first `count`
// entries of a sorted time list. Buckets are half-open
// [m*day_length, (m+1)*day_length), so the sequence of buckets is
// nondecreasing and distinct values can be counted in one pass.
inline double active_day_count(std::span<const double> times, std::size_t count,
                               double day_length) {
    double distinct = 0.0;
    double prev_bucket = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double bucket = std::floor(times[i] / day_length);
        if (distinct == 0.0 || bucket != prev_bucket) {
            distinct += 1.0;
            prev_bucket = bucket;
        }
    }
    return distinct;
}

inline double feature_value(const BadgeSpec& badge, std::span<const double> times,
                            std::size_t count) {
    if (badge.feature == BadgeFeature::EventCount) {
        return static_cast<double>(count);
    }
    return active_day_count(times, count, badge.day_length);
}

}  // namespace detail

// Badge progress of `user` from events strictly before t. An event never
// contributes to the intensity at its own time.
inline double history_feature(const BadgeSpec& badge, const Dataset& data, UserId user,
                              double t) {
    const std::vector<double>& times = data.feature_times(user, badge.action);
    const std::size_t count = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t) - times.begin());
    return detail::feature_value(badge, times, count);
}

namespace detail {

inline double badge_lift_sum(const std::vector<BadgeSpec>& badges, const Dataset& data,
                             UserId user, double t) {
    double s = 0.0;
    for (const BadgeSpec& b : badges) {
        s += badge_kernel(b.kernel, history_feature(b, data, user, t), b.threshold,
                          b.bandwidth);
    }
    return s;
}

}  // namespace detail

inline double question_intensity(UserId user, double t, const Dataset& data,
                                 const UserParams& p, const ModelConfig& cfg) {
    double lift = 0.0;
    if (p.rho_q > 0.0 && !cfg.badges_q.empty()) {
        lift = detail::badge_lift_sum(cfg.badges_q, data, user, t);
    }
    return p.mu_q + p.rho_q * lift;
}

// Candidate parents for an answer at time t: every question strictly before t
// whose decay factor still clears cross_cutoff. When the window is empty but
// earlier questions exist, the most recent one is kept so the distribution
// stays defined. `ensure` (an observed parent) is always included.
struct ParentCandidates {
    std::vector<EventIndex> events;  // global event indices, in time order
    std::vector<double> decay;       // f_w(t_i, t) per candidate
};

inline ParentCandidates answer_candidates(const Dataset& data, const ModelConfig& cfg,
                                          double t,
                                          std::optional<EventIndex> ensure = std::nullopt) {
    ParentCandidates out;
    const auto& qt = data.question_times;
    const std::size_t end = data.questions_before(t);
    if (end == 0) return out;

    const double window = cfg.question_window();
    std::size_t begin = 0;
    if (std::isfinite(window)) {
        begin = static_cast<std::size_t>(
            std::lower_bound(qt.begin(), qt.begin() + static_cast<std::ptrdiff_t>(end),
                             t - window) -
            qt.begin());
    }
    if (begin == end) begin = end - 1;  // all candidates stale: keep the newest

    out.events.reserve(end - begin + (ensure ? 1u : 0u));
    out.decay.reserve(out.events.capacity());
    if (ensure && data.typed_pos[*ensure] < begin) {
        out.events.push_back(*ensure);
        out.decay.push_back(time_decay(data.events[*ensure].time, t, cfg.decay_w));
    }
    for (std::size_t i = begin; i < end; ++i) {
        out.events.push_back(data.questions[i]);
        out.decay.push_back(time_decay(qt[i], t, cfg.decay_w));
    }
    return out;
}

inline double answer_intensity(UserId user, double t, const Dataset& data,
                               const UserParams& p, const ModelConfig& cfg) {
    double lift = 0.0;
    if (p.rho_a > 0.0 && !cfg.badges_a.empty()) {
        lift = detail::badge_lift_sum(cfg.badges_a, data, user, t);
    }
    double triggered = 0.0;
    const ParentCandidates cands = answer_candidates(data, cfg, t);
    for (std::size_t i = 0; i < cands.events.size(); ++i) {
        triggered += p.eta[data.events[cands.events[i]].tag()] * cands.decay[i];
    }
    return p.mu_a + p.rho_a * lift + triggered;
}

// Tag distribution for the user's next question; time-independent.
inline std::vector<double> question_mark_pmf(const UserParams& p) {
    double total = 0.0;
    for (double v : p.alpha) total += v;
    if (!(total > 0.0)) {
        throw DegenerateParameterError("question_mark_pmf: alpha sums to zero");
    }
    std::vector<double> pmf(p.alpha.size());
    for (std::size_t k = 0; k < pmf.size(); ++k) pmf[k] = p.alpha[k] / total;
    return pmf;
}

struct ParentPmf {
    std::vector<EventIndex> candidates;  // global question event indices
    std::vector<double> prob;
};

// Distribution over which earlier question an answer at time t attaches to.
inline ParentPmf answer_parent_pmf(UserId /*user*/, double t, const Dataset& data,
                                   const UserParams& p, const ModelConfig& cfg) {
    if (data.questions_before(t) == 0) {
        throw NoCandidateError("answer_parent_pmf: no question precedes the query time");
    }
    ParentCandidates cands = answer_candidates(data, cfg, t);
    double total = 0.0;
    std::vector<double> weight(cands.events.size());
    for (std::size_t i = 0; i < cands.events.size(); ++i) {
        weight[i] = p.eta[data.events[cands.events[i]].tag()] * cands.decay[i];
        total += weight[i];
    }
    if (!(total > 0.0)) {
        throw DegenerateParameterError("answer_parent_pmf: all candidate weights are zero");
    }
    ParentPmf pmf;
    pmf.candidates = std::move(cands.events);
    pmf.prob.resize(weight.size());
    for (std::size_t i = 0; i < weight.size(); ++i) pmf.prob[i] = weight[i] / total;
    return pmf;
}

// Exact integral of one badge kernel over [t0, t1]. The progress feature is
// constant between the user's own badge-eligible events, so the integral is a
// finite sum of kernel-value * segment-length pieces.
inline double badge_integral(const BadgeSpec& badge, const Dataset& data, UserId user,
                             double t0, double t1) {
    if (t1 < t0) {
        throw std::invalid_argument("badge_integral: t1 must not precede t0");
    }
    if (t1 == t0) return 0.0;
    const std::vector<double>& times = data.feature_times(user, badge.action);

    // progress state covering events with time <= t0 (they are strictly
    // before every point of the open segment)
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(times.begin(), times.end(), t0) - times.begin());
    double count = static_cast<double>(idx);
    double distinct = 0.0;
    double prev_bucket = -1.0;
    const bool days = badge.feature == BadgeFeature::ActiveDays;
    if (days) {
        for (std::size_t i = 0; i < idx; ++i) {
            const double bucket = std::floor(times[i] / badge.day_length);
            if (distinct == 0.0 || bucket != prev_bucket) {
                distinct += 1.0;
                prev_bucket = bucket;
            }
        }
    }

    double integral = 0.0;
    double seg_start = t0;
    while (idx < times.size() && times[idx] < t1) {
        const double value = days ? distinct : count;
        integral += badge_kernel(badge.kernel, value, badge.threshold, badge.bandwidth) *
                    (times[idx] - seg_start);
        seg_start = times[idx];
        count += 1.0;
        if (days) {
            const double bucket = std::floor(times[idx] / badge.day_length);
            if (distinct == 0.0 || bucket != prev_bucket) {
                distinct += 1.0;
                prev_bucket = bucket;
            }
        }
        ++idx;
    }
    const double value = days ? distinct : count;
    integral += badge_kernel(badge.kernel, value, badge.threshold, badge.bandwidth) *
                (t1 - seg_start);
    return integral;
}

// Integral of the question intensity of `user` over [t0, t1], in closed form.
inline double question_compensator(UserId user, const Dataset& data, const UserParams& p,
                                   const ModelConfig& cfg, double t0, double t1) {
    if (t1 < t0) {
        throw std::invalid_argument("question_compensator: t1 must not precede t0");
    }
    double total = p.mu_q * (t1 - t0);
    if (p.rho_q != 0.0) {
        for (const BadgeSpec& b : cfg.badges_q) {
            total += p.rho_q * badge_integral(b, data, user, t0, t1);
        }
    }
    return total;
}

// Integral of the answer intensity of `user` over [t0, t1]. Question-triggered
// terms integrate in closed form; terms whose decay factor is already below
// cross_cutoff at the start of the interval are dropped.
inline double answer_compensator(UserId user, const Dataset& data, const UserParams& p,
                                 const ModelConfig& cfg, double t0, double t1) {
    if (t1 < t0) {
        throw std::invalid_argument("answer_compensator: t1 must not precede t0");
    }
    double total = p.mu_a * (t1 - t0);
    if (p.rho_a != 0.0) {
        for (const BadgeSpec& b : cfg.badges_a) {
            total += p.rho_a * badge_integral(b, data, user, t0, t1);
        }
    }

    const double w = cfg.decay_w;
    const double window = cfg.question_window();
    const auto& qt = data.question_times;
    const std::size_t end = static_cast<std::size_t>(
        std::lower_bound(qt.begin(), qt.end(), t1) - qt.begin());
    std::size_t begin = 0;
    if (std::isfinite(window)) {
        begin = static_cast<std::size_t>(
            std::lower_bound(qt.begin(), qt.begin() + static_cast<std::ptrdiff_t>(end),
                             t0 - window) -
            qt.begin());
    }
    for (std::size_t i = begin; i < end; ++i) {
        const double t_i = qt[i];
        const double from = std::max(t0, t_i);
        const double eta = p.eta[data.events[data.questions[i]].tag()];
        total += eta / w * (std::exp(-w * (from - t_i)) - std::exp(-w * (t1 - t_i)));
    }
    return total;
}

namespace detail {

// log of an event's mark probability plus its temporal intensity; shared by
// the likelihood and the evaluation pipeline
struct EventLogTerms {
    double log_intensity = 0.0;
    double log_mark = 0.0;
};

inline EventLogTerms question_event_terms(std::size_t idx, const Dataset& data,
                                          const UserParams& p, const ModelConfig& cfg) {
    const Event& e = data.events[idx];
    const double lambda = question_intensity(e.user, e.time, data, p, cfg);
    if (!(lambda > 0.0)) {
        throw ZeroLikelihoodError(idx, "question event has zero intensity");
    }
    double total = 0.0;
    for (double v : p.alpha) total += v;
    const double mark = total > 0.0 ? p.alpha[e.tag()] / total : 0.0;
    if (!(mark > 0.0)) {
        throw ZeroLikelihoodError(idx, "question event has zero tag probability");
    }
    return {std::log(lambda), std::log(mark)};
}

inline EventLogTerms answer_event_terms(std::size_t idx, const Dataset& data,
                                        const UserParams& p, const ModelConfig& cfg) {
    const Event& e = data.events[idx];
    const EventIndex parent = e.parent();
    // one candidate set (observed parent always included) backs both the
    // intensity and the mark normalizer, keeping the two terms consistent
    const ParentCandidates cands = answer_candidates(data, cfg, e.time, parent);
    double lift = 0.0;
    if (p.rho_a > 0.0 && !cfg.badges_a.empty()) {
        lift = badge_lift_sum(cfg.badges_a, data, e.user, e.time);
    }
    double triggered = 0.0;
    double parent_weight = 0.0;
    for (std::size_t i = 0; i < cands.events.size(); ++i) {
        const double wgt = p.eta[data.events[cands.events[i]].tag()] * cands.decay[i];
        triggered += wgt;
        if (cands.events[i] == parent) parent_weight = wgt;
    }
    const double lambda = p.mu_a + p.rho_a * lift + triggered;
    if (!(lambda > 0.0)) {
        throw ZeroLikelihoodError(idx, "answer event has zero intensity");
    }
    if (!(parent_weight > 0.0) || !(triggered > 0.0)) {
        throw ZeroLikelihoodError(idx, "answer event has zero parent probability");
    }
    return {std::log(lambda), std::log(parent_weight / triggered)};
}

}  // namespace detail

// Observed-data log-likelihood of a full event log under per-user parameters:
// per-event intensity and mark terms minus both compensators over [0, T].
inline double dataset_log_likelihood(const Dataset& data,
                                     const std::vector<UserParams>& params,
                                     const ModelConfig& cfg) {
    if (params.size() != data.num_users) {
        throw std::invalid_argument("dataset_log_likelihood: one UserParams per user required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.events.size(); ++i) {
        const Event& e = data.events[i];
        const detail::EventLogTerms terms =
            e.is_question() ? detail::question_event_terms(i, data, params[e.user], cfg)
                            : detail::answer_event_terms(i, data, params[e.user], cfg);
        total += terms.log_intensity + terms.log_mark;
    }
    for (UserId u = 0; u < data.num_users; ++u) {
        total -= question_compensator(u, data, params[u], cfg, 0.0, data.horizon);
        total -= answer_compensator(u, data, params[u], cfg, 0.0, data.horizon);
    }
    return total;
}

}  // namespace badgeproc
