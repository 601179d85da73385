#pragma once

#include <atomic>

#include "argnet/data/types.hpp"

namespace argnet::data {

/// Counts field reads made through SampleView. Used to prove that a model
/// never touches rationale fields.
struct AccessAudit {
    std::atomic<long> news_reads{0};
    std::atomic<long> rationale_reads{0};

    void reset() noexcept {
        news_reads = 0;
        rationale_reads = 0;
    }
};

/// Read-only accessor that models receive instead of the raw sample.
class SampleView {
public:
    explicit SampleView(const EnrichedSample& sample, AccessAudit* audit = nullptr) noexcept
        : sample_(&sample), audit_(audit) {}

    const NewsItem& news() const noexcept {
        if (audit_) audit_->news_reads.fetch_add(1, std::memory_order_relaxed);
        return sample_->item;
    }

    /// Throws MissingFieldError when the record is absent.
    const RationaleRecord& rationale(Perspective p) const;

private:
    const EnrichedSample* sample_;
    AccessAudit* audit_;
};

}  // namespace argnet::data
