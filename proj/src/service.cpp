#include "factoropt/service.hpp"

#include <httplib.h>

#include "factoropt/error.hpp"
#include "factoropt/optimize.hpp"

namespace factoropt {

using nlohmann::json;

namespace {

struct RequestError {
    std::string field;
    std::string message;
};

ApiResponse bad_request(const RequestError& e) {
    json body{{"error", e.message}};
    if (!e.field.empty()) body["field"] = e.field;
    return {400, body};
}

json parse_body(std::string_view body) {
    try {
        auto doc = json::parse(body);
        if (!doc.is_object()) throw RequestError{"", "request body must be a JSON object"};
        return doc;
    } catch (const json::parse_error& e) {
        throw RequestError{"", std::string("malformed JSON: ") + e.what()};
    }
}

int parse_level(const json& v, const std::string& field) {
    if (!v.is_number_integer())
        throw RequestError{field, "level must be an integer in 1..9"};
    const auto level = v.get<long long>();
    if (level < kMinLevel || level > kMaxLevel)
        throw RequestError{field, "level " + std::to_string(level) + " outside 1..9"};
    return static_cast<int>(level);
}

// Full-length levels: an array in catalog order or an object keyed by factor id.
std::vector<int> parse_levels(const json& v, const FactorCatalog& catalog, const std::string& field) {
    const std::size_t d = catalog.size();
    std::vector<int> out(d);
    if (v.is_array()) {
        if (v.size() != d)
            throw RequestError{field, "expected " + std::to_string(d) + " levels, got " +
                                          std::to_string(v.size())};
        for (std::size_t j = 0; j < d; ++j) out[j] = parse_level(v[j], field + "[" + std::to_string(j) + "]");
        return out;
    }
    if (v.is_object()) {
        for (const auto& [key, val] : v.items())
            if (!catalog.factor_index(key)) throw RequestError{field + "." + key, "unknown factor"};
        for (std::size_t j = 0; j < d; ++j) {
            const auto& id = catalog.factors()[j].id;
            if (!v.contains(id)) throw RequestError{field + "." + id, "missing level"};
            out[j] = parse_level(v.at(id), field + "." + id);
        }
        return out;
    }
    throw RequestError{field, "levels must be an array or an object keyed by factor id"};
}

// Absent: all factors. String: a category id. Array: factor ids.
std::vector<std::size_t> parse_scope(const json& body, const FactorCatalog& catalog) {
    std::vector<std::size_t> out;
    if (!body.contains("scope") || body.at("scope").is_null()) {
        for (std::size_t j = 0; j < catalog.size(); ++j) out.push_back(j);
        return out;
    }
    const auto& s = body.at("scope");
    if (s.is_string()) {
        const auto id = s.get<std::string>();
        if (!catalog.category_index(id)) throw RequestError{"scope", "unknown category '" + id + "'"};
        return catalog.category_members(id);
    }
    if (!s.is_array() || s.empty()) throw RequestError{"scope", "scope must be a category id or a non-empty list of factor ids"};
    std::vector<bool> seen(catalog.size(), false);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const std::string field = "scope[" + std::to_string(k) + "]";
        if (!s[k].is_string()) throw RequestError{field, "factor id must be a string"};
        const auto j = catalog.factor_index(s[k].get<std::string>());
        if (!j) throw RequestError{field, "unknown factor '" + s[k].get<std::string>() + "'"};
        if (seen[*j]) throw RequestError{field, "duplicate factor"};
        seen[*j] = true;
        out.push_back(*j);
    }
    return out;
}

GAParams parse_params(const json& body, GAParams p) {
    if (!body.contains("params")) return p;
    const auto& jp = body.at("params");
    if (!jp.is_object()) throw RequestError{"params", "params must be an object"};
    auto count = [&](const char* key, std::size_t& dst) {
        if (!jp.contains(key)) return;
        if (!jp.at(key).is_number_unsigned()) throw RequestError{std::string("params.") + key, "must be a non-negative integer"};
        dst = jp.at(key).get<std::size_t>();
    };
    auto prob = [&](const char* key, double& dst) {
        if (!jp.contains(key)) return;
        if (!jp.at(key).is_number()) throw RequestError{std::string("params.") + key, "must be a number"};
        dst = jp.at(key).get<double>();
    };
    count("population", p.population);
    count("generations", p.generations);
    count("tournament", p.tournament);
    count("elites", p.elites);
    prob("crossover", p.crossover);
    if (jp.contains("mutation")) {
        double m = 0.0;
        prob("mutation", m);
        p.mutation = m;
    }
    if (jp.contains("seed")) {
        if (!jp.at("seed").is_number_unsigned()) throw RequestError{"params.seed", "must be a non-negative integer"};
        p.seed = jp.at("seed").get<std::uint64_t>();
    }
    try {
        validate(p);
    } catch (const Error& e) {
        throw RequestError{"params", e.what()};
    }
    return p;
}

json report_json(const FitnessReport& r) {
    return {{"p_agg", r.p_agg}, {"cost", r.cost}, {"c_norm", r.c_norm}, {"fitness", r.fitness}};
}

json levels_by_id(const std::vector<std::size_t>& idx, const std::vector<int>& levels,
                  const FactorCatalog& catalog) {
    json out = json::object();
    for (std::size_t k = 0; k < idx.size(); ++k) out[catalog.factors()[idx[k]].id] = levels[k];
    return out;
}

}  // namespace

struct Service::Job {
    std::size_t id = 0;
    std::string status = "running";
    Scope scope;
    GAParams params;
    std::vector<double> trajectory;
    std::optional<GAResult> result;
    std::string error;
};

Service::Service(const FactorCatalog& catalog, AggregatedScorer scorer, std::vector<int> baseline,
                 std::vector<DescriptiveRow> descriptives, ServiceOptions options)
    : catalog_(catalog),
      scorer_(std::move(scorer)),
      baseline_(std::move(baseline)),
      descriptives_(std::move(descriptives)),
      options_(options) {
    if (baseline_.size() != catalog_.size()) throw validation_error("baseline length does not match catalog");
    if (scorer_.dims() != catalog_.size()) throw validation_error("scorer does not match catalog");
    if (options_.max_jobs < 1) throw validation_error("max_jobs must be at least 1");
}

Service::~Service() { wait_all(); }

void Service::wait_all() {
    std::vector<std::jthread> workers;
    {
        std::lock_guard lock(mutex_);
        workers.swap(workers_);
    }
    for (auto& w : workers)
        if (w.joinable()) w.join();
}

ApiResponse Service::catalog() const {
    json body;
    body["factors"] = json::array();
    for (std::size_t j = 0; j < catalog_.size(); ++j) {
        const auto& f = catalog_.factors()[j];
        body["factors"].push_back({{"id", f.id},
                                   {"name", f.name},
                                   {"kind", to_string(f.kind)},
                                   {"category_id", f.category_id},
                                   {"baseline", baseline_[j]}});
    }
    body["categories"] = json::array();
    for (const auto& c : catalog_.categories()) {
        json members = json::array();
        for (auto j : catalog_.category_members(c.id)) members.push_back(catalog_.factors()[j].id);
        body["categories"].push_back(
            {{"id", c.id}, {"name", c.name}, {"side", to_string(c.side)}, {"factors", members}});
    }
    body["baseline"] = json::object();
    for (std::size_t j = 0; j < catalog_.size(); ++j) body["baseline"][catalog_.factors()[j].id] = baseline_[j];
    return {200, body};
}

ApiResponse Service::descriptives() const {
    json rows = json::array();
    for (const auto& r : descriptives_) {
        const auto& f = catalog_.factors().at(r.factor);
        rows.push_back({{"factor_id", f.id}, {"factor", f.name}, {"kind", to_string(f.kind)},
                        {"mean", r.mean}, {"sd", r.sd}, {"n", r.n}});
    }
    return {200, {{"rows", rows}}};
}

ApiResponse Service::evaluate(std::string_view text) const {
    try {
        const json body = parse_body(text);
        if (!body.contains("levels")) throw RequestError{"levels", "missing levels"};
        const auto full = parse_levels(body.at("levels"), catalog_, "levels");
        const auto scope_idx = parse_scope(body, catalog_);

        const auto b = scorer_.breakdown(full);
        int cost = 0;
        for (auto j : scope_idx) cost += full[j];
        const double c_norm = normalized_cost(cost, scope_idx.size());
        json scope_ids = json::array();
        for (auto j : scope_idx) scope_ids.push_back(catalog_.factors()[j].id);
        return {200,
                {{"p_nb", b.p_nb},
                 {"p_lr", b.p_lr},
                 {"p_agg", b.p_agg},
                 {"cost", cost},
                 {"c_norm", c_norm},
                 {"fitness", b.p_agg - c_norm},
                 {"scope", scope_ids}}};
    } catch (const RequestError& e) {
        return bad_request(e);
    }
}

ApiResponse Service::submit_optimize(std::string_view text) {
    std::shared_ptr<Job> job;
    try {
        const json body = parse_body(text);
        auto scope_idx = parse_scope(body, catalog_);
        auto context = body.contains("context") ? parse_levels(body.at("context"), catalog_, "context")
                                                : baseline_;
        job = std::make_shared<Job>();
        job->scope = Scope::subset(std::move(scope_idx), std::move(context));
        job->params = parse_params(body, options_.ga);
        job->params.threads = 1;
    } catch (const RequestError& e) {
        return bad_request(e);
    }

    std::lock_guard lock(mutex_);
    std::size_t running = 0;
    for (const auto& [id, j] : jobs_) running += j->status == "running";
    if (running >= options_.max_jobs)
        return {409, {{"error", "optimization job limit reached"}, {"max_jobs", options_.max_jobs}}};

    job->id = next_id_++;
    jobs_[job->id] = job;
    workers_.emplace_back([this, job] {
        try {
            auto on_gen = [&](std::size_t, double best) {
                std::lock_guard g(mutex_);
                job->trajectory.push_back(best);
            };
            auto fn = [this](std::span<const int> s) { return scorer_.probability(s); };
            GAResult r = run_ga(fn, job->scope, job->params, on_gen);
            std::lock_guard g(mutex_);
            job->result = std::move(r);
            job->status = "done";
        } catch (const std::exception& e) {
            std::lock_guard g(mutex_);
            job->error = e.what();
            job->status = "failed";
        }
    });
    return {202, {{"job_id", std::to_string(job->id)}, {"status", "running"}}};
}

ApiResponse Service::job_status(std::string_view id_text) const {
    std::size_t id = 0;
    try {
        std::size_t used = 0;
        id = std::stoul(std::string(id_text), &used);
        if (used != id_text.size()) throw std::invalid_argument("id");
    } catch (const std::exception&) {
        return {404, {{"error", "unknown job '" + std::string(id_text) + "'"}}};
    }
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return {404, {{"error", "unknown job '" + std::string(id_text) + "'"}}};
    const Job& job = *it->second;
    json body{{"job_id", std::to_string(job.id)},
              {"status", job.status},
              {"generations", job.params.generations},
              {"trajectory", job.trajectory}};
    json scope_ids = json::array();
    for (auto j : job.scope.optimized) scope_ids.push_back(catalog_.factors()[j].id);
    body["scope"] = scope_ids;
    if (job.result) {
        const auto& r = *job.result;
        body["result"] = {{"best", levels_by_id(job.scope.optimized, r.best.levels, catalog_)},
                          {"best_report", report_json(r.best_report)},
                          {"baseline", levels_by_id(job.scope.optimized, r.baseline.levels, catalog_)},
                          {"baseline_report", report_json(r.baseline_report)},
                          {"delta_fitness", r.delta_fitness},
                          {"seed", r.params.seed}};
    }
    if (!job.error.empty()) body["error"] = job.error;
    return {200, body};
}

void Service::mount(httplib::Server& server) {
    auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get("/api/catalog", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, catalog());
    });
    server.Get("/api/descriptives", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, descriptives());
    });
    server.Post("/api/evaluate", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, evaluate(req.body));
    });
    server.Post("/api/optimize", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, submit_optimize(req.body));
    });
    server.Get(R"(/api/optimize/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, job_status(req.matches[1].str()));
    });
}

}  // namespace factoropt
