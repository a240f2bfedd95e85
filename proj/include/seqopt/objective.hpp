#pragma once

// Objective evaluation: the backend interface, the memoizing evaluation
// ledger, and a deterministic parallel batch driver.

#include <cstdint>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/pareto.hpp"

namespace seqopt {

/// Backend failure with the offending design vector attached.
class BackendError : public std::runtime_error {
public:
    BackendError(std::string message, DesignVector v)
        : std::runtime_error(std::move(message)), vector(std::move(v)) {}
    DesignVector vector;
};

/// A pure, deterministic map from design vectors to objective vectors.
/// Implementations must be safe to call concurrently.
class ObjectiveBackend {
public:
    virtual ~ObjectiveBackend() = default;
    virtual std::size_t objective_count() const = 0;
    virtual std::vector<std::string> objective_names() const {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < objective_count(); ++i)
            names.push_back("f" + std::to_string(i + 1));
        return names;
    }
    virtual ObjectiveVector evaluate(const DesignVector& v) const = 0;
};

enum class CountMode { unique, raw };

inline std::string_view to_string(CountMode m) {
    return m == CountMode::unique ? "unique" : "raw";
}

struct LedgerCounts {
    std::uint64_t raw_requests = 0;
    std::uint64_t unique_evaluations = 0;

    std::uint64_t get(CountMode mode) const {
        return mode == CountMode::unique ? unique_evaluations : raw_requests;
    }
    friend bool operator==(const LedgerCounts&, const LedgerCounts&) = default;
};

/// Memoizing evaluation counter. Separates raw requests from unique backend
/// invocations; memo hits never re-invoke the backend. Updates are
/// linearizable, and final counts and memo contents are schedule-independent
/// because backends are pure.
class EvaluationLedger {
public:
    ObjectiveVector evaluate(const ObjectiveBackend& backend, const DesignVector& v) {
        {
            std::lock_guard lock(mu_);
            ++raw_;
            auto it = memo_.find(v);
            if (it != memo_.end()) return it->second;
        }
        ObjectiveVector val = backend.evaluate(v);
        std::lock_guard lock(mu_);
        return memo_.emplace(v, std::move(val)).first->second;
    }

    /// Memoized value if present, nullptr otherwise. Does not count.
    const ObjectiveVector* lookup(const DesignVector& v) const {
        std::lock_guard lock(mu_);
        auto it = memo_.find(v);
        return it == memo_.end() ? nullptr : &it->second;
    }

    LedgerCounts counts() const {
        std::lock_guard lock(mu_);
        return {raw_, memo_.size()};
    }
    std::uint64_t raw_requests() const { return counts().raw_requests; }
    std::uint64_t unique_evaluations() const { return counts().unique_evaluations; }

    void reserve(std::size_t n) { memo_.reserve(n); }

private:
    friend void batch_evaluate(EvaluationLedger&, const ObjectiveBackend&,
                               std::span<const DesignVector>, std::vector<ObjectiveVector>*,
                               unsigned);
    mutable std::mutex mu_;
    std::unordered_map<DesignVector, ObjectiveVector, DesignVectorHash> memo_;
    std::uint64_t raw_ = 0;
};

/// Evaluates a batch through the ledger. Unknown vectors are computed in
/// parallel (`jobs` threads), then committed in candidate order, so counters,
/// memo contents and any returned values are independent of the thread count.
inline void batch_evaluate(EvaluationLedger& ledger, const ObjectiveBackend& backend,
                           std::span<const DesignVector> candidates,
                           std::vector<ObjectiveVector>* out, unsigned jobs) {
    std::vector<const DesignVector*> work;
    {
        std::lock_guard lock(ledger.mu_);
        std::unordered_map<DesignVector, std::size_t, DesignVectorHash> queued;
        for (const DesignVector& v : candidates)
            if (!ledger.memo_.count(v) && !queued.count(v)) {
                queued.emplace(v, work.size());
                work.push_back(&v);
            }
    }
    std::vector<ObjectiveVector> values(work.size());
    if (jobs <= 1 || work.size() < 256) {
        for (std::size_t i = 0; i < work.size(); ++i)
            values[i] = backend.evaluate(*work[i]);
    } else {
        std::exception_ptr error;
        std::mutex error_mu;
        std::vector<std::thread> threads;
        std::size_t chunk = (work.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(work.size(), lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back([&, lo, hi] {
                try {
                    for (std::size_t i = lo; i < hi; ++i)
                        values[i] = backend.evaluate(*work[i]);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        if (error) std::rethrow_exception(error);
    }
    std::lock_guard lock(ledger.mu_);
    for (std::size_t i = 0; i < work.size(); ++i)
        ledger.memo_.emplace(*work[i], std::move(values[i]));
    ledger.raw_ += candidates.size();
    if (out) {
        out->clear();
        out->reserve(candidates.size());
        for (const DesignVector& v : candidates)
            out->push_back(ledger.memo_.at(v));
    }
}

inline void batch_evaluate(EvaluationLedger& ledger, const ObjectiveBackend& backend,
                           std::span<const DesignVector> candidates, unsigned jobs) {
    batch_evaluate(ledger, backend, candidates, nullptr, jobs);
}

} // namespace seqopt
