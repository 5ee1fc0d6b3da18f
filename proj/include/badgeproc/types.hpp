#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "badgeproc/errors.hpp"

namespace badgeproc {

using UserId = std::uint32_t;
using TagId = std::uint32_t;
using EventIndex = std::uint32_t;

enum class ActionKind : std::uint8_t { Question, Answer };
enum class BadgeFeature : std::uint8_t { EventCount, ActiveDays };
enum class KernelKind : std::uint8_t { Gaussian, Exponential };

struct QuestionMark {
    TagId tag = 0;
};

struct AnswerMark {
    // index of the parent question event in the global log
    EventIndex parent = 0;
};

// One timestamped user action. Times are nonnegative reals in model units
// (days by default); there are no wall-clock types anywhere in the core.
struct Event {
    double time = 0.0;
    UserId user = 0;
    std::variant<QuestionMark, AnswerMark> payload = QuestionMark{};
    // Ingested logs may mark events that do not advance badge progress
    // (e.g. actions that failed a site's quality criterion).
    bool badge_eligible = true;

    bool is_question() const noexcept { return std::holds_alternative<QuestionMark>(payload); }
    bool is_answer() const noexcept { return std::holds_alternative<AnswerMark>(payload); }
    ActionKind kind() const noexcept {
        return is_question() ? ActionKind::Question : ActionKind::Answer;
    }
    TagId tag() const { return std::get<QuestionMark>(payload).tag; }
    EventIndex parent() const { return std::get<AnswerMark>(payload).parent; }
};

inline Event make_question(double time, UserId user, TagId tag, bool eligible = true) {
    return Event{time, user, QuestionMark{tag}, eligible};
}

inline Event make_answer(double time, UserId user, EventIndex parent, bool eligible = true) {
    return Event{time, user, AnswerMark{parent}, eligible};
}

// One badge: what action it rewards, the threshold to win it, which history
// summary measures progress, and the kernel translating proximity to the
// threshold into intensity lift.
struct BadgeSpec {
    std::string name;
    ActionKind action = ActionKind::Question;
    double threshold = 1.0;                        // tau_b
    BadgeFeature feature = BadgeFeature::EventCount;
    KernelKind kernel = KernelKind::Gaussian;
    double bandwidth = 1.0;                        // omega
    double day_length = 1.0;                       // bucket width for ActiveDays
};

inline void validate(const BadgeSpec& badge) {
    if (!(badge.threshold > 0.0) || !std::isfinite(badge.threshold)) {
        throw std::invalid_argument("BadgeSpec: threshold must be positive");
    }
    if (!(badge.bandwidth > 0.0) || !std::isfinite(badge.bandwidth)) {
        throw std::invalid_argument("BadgeSpec: bandwidth must be positive");
    }
    if (!(badge.day_length > 0.0) || !std::isfinite(badge.day_length)) {
        throw std::invalid_argument("BadgeSpec: day_length must be positive");
    }
}

// Per-user parameter block: exogenous rates, badge sensitivities, interest
// and expertise simplices over tags.
struct UserParams {
    double mu_q = 0.0;
    double mu_a = 0.0;
    double rho_q = 0.0;
    double rho_a = 0.0;
    std::vector<double> alpha;  // interest over tags, sums to 1
    std::vector<double> eta;    // expertise over tags, sums to 1
};

inline void validate(const UserParams& p, std::uint32_t num_tags) {
    if (p.mu_q < 0 || p.mu_a < 0 || p.rho_q < 0 || p.rho_a < 0 ||
        !std::isfinite(p.mu_q) || !std::isfinite(p.mu_a) ||
        !std::isfinite(p.rho_q) || !std::isfinite(p.rho_a)) {
        throw std::invalid_argument("UserParams: rates must be finite and nonnegative");
    }
    if (p.alpha.size() != num_tags || p.eta.size() != num_tags) {
        throw std::invalid_argument("UserParams: alpha/eta must have one entry per tag");
    }
    double sa = 0.0, se = 0.0;
    for (double v : p.alpha) {
        if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("UserParams: alpha entries must be nonnegative");
        sa += v;
    }
    for (double v : p.eta) {
        if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("UserParams: eta entries must be nonnegative");
        se += v;
    }
    if (std::abs(sa - 1.0) > 1e-9) throw std::invalid_argument("UserParams: alpha must sum to 1");
    if (std::abs(se - 1.0) > 1e-9) throw std::invalid_argument("UserParams: eta must sum to 1");
}

// Model-level configuration shared by all users.
struct ModelConfig {
    std::vector<BadgeSpec> badges_q;  // action == Question
    std::vector<BadgeSpec> badges_a;  // action == Answer
    double decay_w = 1.0;             // rate of the question->answer decay
    // Question terms whose decay factor falls below this are dropped from
    // answer-intensity sums and parent distributions.
    double cross_cutoff = 1e-12;
    std::string time_unit = "days";

    // lag beyond which a question's influence falls under cross_cutoff
    double question_window() const {
        if (cross_cutoff <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(cross_cutoff) / decay_w;
    }
};

inline void validate(const ModelConfig& cfg) {
    if (!(cfg.decay_w > 0.0) || !std::isfinite(cfg.decay_w)) {
        throw std::invalid_argument("ModelConfig: decay_w must be positive");
    }
    if (cfg.cross_cutoff < 0.0 || cfg.cross_cutoff >= 1.0) {
        throw std::invalid_argument("ModelConfig: cross_cutoff must lie in [0, 1)");
    }
    for (const BadgeSpec& b : cfg.badges_q) {
        validate(b);
        if (b.action != ActionKind::Question) {
            throw std::invalid_argument("ModelConfig: badges_q entry with non-question action");
        }
    }
    for (const BadgeSpec& b : cfg.badges_a) {
        validate(b);
        if (b.action != ActionKind::Answer) {
            throw std::invalid_argument("ModelConfig: badges_a entry with non-answer action");
        }
    }
}

// Time-ordered event log over [0, horizon] together with the per-user and
// global views every operation needs. Immutable after construction; build
// instances through make_dataset.
struct Dataset {
    std::vector<Event> events;
    double horizon = 0.0;
    std::uint32_t num_users = 0;
    std::uint32_t num_tags = 0;

    // derived views
    std::vector<EventIndex> questions;  // global indices of questions, in time order
    std::vector<EventIndex> answers;
    std::vector<double> question_times;  // aligned with `questions`
    std::vector<std::uint32_t> typed_pos;  // global index -> position in questions/answers
    std::vector<std::vector<EventIndex>> user_questions;
    std::vector<std::vector<EventIndex>> user_answers;
    // badge-eligible event times per user, used for badge progress features
    std::vector<std::vector<double>> user_question_feature_times;
    std::vector<std::vector<double>> user_answer_feature_times;

    const std::vector<EventIndex>& user_events(UserId u, ActionKind kind) const {
        return kind == ActionKind::Question ? user_questions[u] : user_answers[u];
    }

    const std::vector<double>& feature_times(UserId u, ActionKind kind) const {
        return kind == ActionKind::Question ? user_question_feature_times[u]
                                            : user_answer_feature_times[u];
    }

    // number of questions (any user) strictly before t
    std::size_t questions_before(double t) const {
        return static_cast<std::size_t>(
            std::lower_bound(question_times.begin(), question_times.end(), t) -
            question_times.begin());
    }
};

inline Dataset make_dataset(std::vector<Event> events, double horizon,
                            std::uint32_t num_users, std::uint32_t num_tags) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("Dataset: horizon must be positive");
    }
    if (num_users == 0 || num_tags == 0) {
        throw std::invalid_argument("Dataset: num_users and num_tags must be positive");
    }

    Dataset d;
    d.events = std::move(events);
    d.horizon = horizon;
    d.num_users = num_users;
    d.num_tags = num_tags;
    d.typed_pos.resize(d.events.size());
    d.user_questions.resize(num_users);
    d.user_answers.resize(num_users);
    d.user_question_feature_times.resize(num_users);
    d.user_answer_feature_times.resize(num_users);

    double prev_time = 0.0;
    for (std::size_t i = 0; i < d.events.size(); ++i) {
        const Event& e = d.events[i];
        const std::string at = "Dataset: event " + std::to_string(i);
        if (!(e.time >= 0.0) || !std::isfinite(e.time)) {
            throw std::invalid_argument(at + " has invalid time");
        }
        if (e.time > horizon) {
            throw std::invalid_argument(at + " lies beyond the horizon");
        }
        if (i > 0 && e.time < prev_time) {
            throw std::invalid_argument(at + " breaks time order");
        }
        prev_time = e.time;
        if (e.user >= num_users) {
            throw std::invalid_argument(at + " has out-of-range user id");
        }
        if (e.is_question()) {
            if (e.tag() >= num_tags) {
                throw std::invalid_argument(at + " has out-of-range tag id");
            }
            d.typed_pos[i] = static_cast<std::uint32_t>(d.questions.size());
            d.questions.push_back(static_cast<EventIndex>(i));
            d.question_times.push_back(e.time);
            d.user_questions[e.user].push_back(static_cast<EventIndex>(i));
            if (e.badge_eligible) d.user_question_feature_times[e.user].push_back(e.time);
        } else {
            const EventIndex p = e.parent();
            if (p >= i) {
                throw std::invalid_argument(at + " has a parent that does not precede it");
            }
            if (!d.events[p].is_question()) {
                throw std::invalid_argument(at + " points at a non-question parent");
            }
            if (!(d.events[p].time < e.time)) {
                throw std::invalid_argument(at + " has a parent with no strictly smaller time");
            }
            d.typed_pos[i] = static_cast<std::uint32_t>(d.answers.size());
            d.answers.push_back(static_cast<EventIndex>(i));
            d.user_answers[e.user].push_back(static_cast<EventIndex>(i));
            if (e.badge_eligible) d.user_answer_feature_times[e.user].push_back(e.time);
        }
    }
    return d;
}

}  // namespace badgeproc
