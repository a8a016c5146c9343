#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "factoropt/dataset.hpp"
#include "factoropt/ga.hpp"
#include "factoropt/scorer.hpp"

namespace httplib {
class Server;
}

namespace factoropt {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

struct ServiceOptions {
    std::size_t max_jobs = 1;
    GAParams ga;  // defaults for /api/optimize; request fields override
};

/// JSON API over an immutable scorer. Handlers are plain member functions so
/// they can be exercised without a socket; mount() wires them into httplib.
///
///   GET  /api/catalog           factors, categories, baseline levels
///   GET  /api/descriptives      per-factor mean/sd/n
///   POST /api/evaluate          {levels, scope?} -> p_nb, p_lr, p_agg, cost, c_norm, fitness
///   POST /api/optimize          {scope?, context?, params?} -> 202 {job_id}
///   GET  /api/optimize/<id>     status, trajectory, result
class Service {
public:
    Service(const FactorCatalog& catalog, AggregatedScorer scorer, std::vector<int> baseline,
            std::vector<DescriptiveRow> descriptives, ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    ApiResponse catalog() const;
    ApiResponse descriptives() const;
    ApiResponse evaluate(std::string_view body) const;
    ApiResponse submit_optimize(std::string_view body);
    ApiResponse job_status(std::string_view id) const;

    /// Blocks until every submitted job has finished.
    void wait_all();

    void mount(httplib::Server& server);

private:
    struct Job;

    const FactorCatalog& catalog_;
    const AggregatedScorer scorer_;
    const std::vector<int> baseline_;
    const std::vector<DescriptiveRow> descriptives_;
    const ServiceOptions options_;

    mutable std::mutex mutex_;
    std::map<std::size_t, std::shared_ptr<Job>> jobs_;
    std::size_t next_id_ = 1;
    std::vector<std::jthread> workers_;
};

}  // namespace factoropt
