#include "wm/metrics.hpp"

#include <algorithm>

namespace wm {

double percent_1dp(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0) return -1.0;
    // tenths of a percent, rounded half away from zero in integer arithmetic
    const std::uint64_t tenths = (numerator * 2000 + denominator) / (2 * denominator);
    return static_cast<double>(tenths) / 10.0;
}

MetricsReport compute_metrics(const std::vector<StepRecord>& trace) {
    MetricsReport report;
    report.events = trace.size();
    if (!trace.empty()) report.policy = to_string(trace.front().policy);

    for (const auto& record : trace) {
        if (record.encode_outcome) {
            switch (record.encode_outcome->kind) {
                case EncodeOutcome::Kind::Added: ++report.encoded; break;
                case EncodeOutcome::Kind::Refreshed: ++report.refreshed; break;
                case EncodeOutcome::Kind::Displaced: ++report.displaced; break;
            }
        } else {
            ++report.encode_errors;
        }
        report.candidates_generated += record.candidates.size();
        for (const auto& candidate : record.candidates) {
            if (candidate.action == CandidateAction::Delivered) ++report.delivered;
            else if (candidate.action == CandidateAction::Discarded) ++report.discarded;
        }
        for (const auto& evaluation : record.deferred_evaluations) {
            switch (evaluation.action) {
                case CandidateAction::Delivered: ++report.delivered; break;
                case CandidateAction::Discarded: ++report.discarded; break;
                case CandidateAction::Expired: ++report.expired; break;
                case CandidateAction::Deferred: break;
            }
        }
        report.deferred_peak =
            std::max(report.deferred_peak, static_cast<std::uint64_t>(record.deferred_queue.size()));
        report.provider_errors += record.errors.size();
    }
    if (!trace.empty()) {
        report.deferred_remaining = trace.back().deferred_queue.size();
    }
    return report;
}

nlohmann::json to_json(const MetricsReport& report) {
    auto pct = [](std::uint64_t numerator, std::uint64_t denominator) -> nlohmann::json {
        const double value = percent_1dp(numerator, denominator);
        if (value < 0.0) return nullptr;
        return value;
    };
    return {
        {"scenario", report.scenario},
        {"policy", report.policy},
        {"events", report.events},
        {"encoded", report.encoded},
        {"refreshed", report.refreshed},
        {"displaced", report.displaced},
        {"encode_errors", report.encode_errors},
        {"candidates_generated", report.candidates_generated},
        {"delivered", report.delivered},
        {"deferred_peak", report.deferred_peak},
        {"deferred_remaining", report.deferred_remaining},
        {"discarded", report.discarded},
        {"expired", report.expired},
        {"provider_errors", report.provider_errors},
        {"rates",
         {{"candidates_per_event_pct", pct(report.candidates_generated, report.events)},
          {"encoded_per_event_pct", pct(report.encoded, report.events)},
          {"refreshed_per_event_pct", pct(report.refreshed, report.events)},
          {"displaced_per_event_pct", pct(report.displaced, report.events)},
          {"delivered_per_candidate_pct", pct(report.delivered, report.candidates_generated)},
          {"discarded_per_candidate_pct", pct(report.discarded, report.candidates_generated)},
          {"expired_per_candidate_pct", pct(report.expired, report.candidates_generated)}}},
    };
}

}  // namespace wm
