#include "bhca/branch_bound.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <deque>
#include <queue>

#include "bhca/errors.hpp"

namespace bhca {

const char* to_string(MilpStatus status) {
    switch (status) {
        case MilpStatus::optimal: return "optimal";
        case MilpStatus::feasible: return "feasible";
        case MilpStatus::infeasible: return "infeasible";
        case MilpStatus::no_solution: return "no_solution";
    }
    return "?";
}

const char* to_string(BranchRule rule) {
    return rule == BranchRule::most_fractional ? "most_fractional" : "lowest_index";
}

const char* to_string(NodeOrder order) { return order == NodeOrder::best_bound ? "best_bound" : "depth_first"; }

BranchRule branch_rule_from(const std::string& s) {
    if (s == "most_fractional") return BranchRule::most_fractional;
    if (s == "lowest_index") return BranchRule::lowest_index;
    throw ConfigError("branch_rule", "unknown branch rule '" + s + "'");
}

NodeOrder node_order_from(const std::string& s) {
    if (s == "best_bound") return NodeOrder::best_bound;
    if (s == "depth_first") return NodeOrder::depth_first;
    throw ConfigError("node_order", "unknown node order '" + s + "'");
}

void SolverOptions::validate() const {
    auto tol_ok = [](double t) { return t > 0 && t <= 1e-3; };
    if (!tol_ok(integrality_tol)) throw ConfigError("integrality_tol", "integrality_tol must be in (0, 1e-3]");
    if (!tol_ok(feas_tol)) throw ConfigError("feas_tol", "feas_tol must be in (0, 1e-3]");
    if (node_limit < 1) throw ConfigError("node_limit", "node_limit must be >= 1");
    if (!(time_limit >= 1e-3)) throw ConfigError("time_limit", "time_limit must be positive");
    if (worker_count < 1) throw ConfigError("worker_count", "worker_count must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    std::vector<std::int8_t> fix;  // per binary: -1 free, 0 or 1
    std::shared_ptr<const SimplexEngine::Basis> basis;
    double bound = kInf;
    int depth = 0;
    long seq = 0;
};

struct BestFirst {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.seq > b.seq;
    }
};

class OpenNodes {
public:
    explicit OpenNodes(NodeOrder order) : order_(order) {}

    bool empty() const { return order_ == NodeOrder::depth_first ? stack_.empty() : heap_.empty(); }
    std::size_t size() const { return order_ == NodeOrder::depth_first ? stack_.size() : heap_.size(); }

    void push(Node n) {
        if (order_ == NodeOrder::depth_first) {
            stack_.push_back(std::move(n));
        } else {
            heap_.push(std::move(n));
        }
    }

    Node pop() {
        Node n;
        if (order_ == NodeOrder::depth_first) {
            n = std::move(stack_.back());
            stack_.pop_back();
        } else {
            n = heap_.top();
            heap_.pop();
        }
        return n;
    }

    double best_bound() const {
        if (order_ == NodeOrder::best_bound) return heap_.empty() ? -kInf : heap_.top().bound;
        double b = -kInf;
        for (const auto& n : stack_) b = std::max(b, n.bound);
        return b;
    }

private:
    NodeOrder order_;
    std::vector<Node> stack_;
    std::priority_queue<Node, std::vector<Node>, BestFirst> heap_;
};

std::string log_line(long node, double bound, bool has_incumbent, double incumbent, double gap) {
    char buf[160];
    if (has_incumbent) {
        std::snprintf(buf, sizeof buf, "node=%ld bound=%.12g incumbent=%.12g gap=%.6g", node, bound, incumbent, gap);
    } else {
        std::snprintf(buf, sizeof buf, "node=%ld bound=%.12g incumbent=none gap=inf", node, bound);
    }
    return buf;
}

double relative_gap(double bound, double incumbent) {
    return std::max(0.0, bound - incumbent) / std::max(std::abs(incumbent), 1e-9);
}

}  // namespace

MilpSolution solve_milp(const LinearProgram& program, const SolverOptions& opts) {
    opts.validate();
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    LpOptions lp_opts;
    lp_opts.feas_tol = opts.feas_tol;
    auto compiled = std::make_shared<const CompiledLp>(program);
    std::deque<SimplexEngine> engines;
    for (int w = 0; w < opts.worker_count; ++w) engines.emplace_back(compiled, lp_opts);

    const std::vector<int> binaries = program.binary_columns();
    const int nb = static_cast<int>(binaries.size());

    MilpSolution result;
    bool has_incumbent = false;
    double incumbent = -kInf;
    long seq = 0;

    auto emit = [&](std::string line) {
        if (opts.log_sink) opts.log_sink(line);
        result.log.push_back(std::move(line));
    };

    auto fixings_of = [&](const std::vector<std::int8_t>& fix) {
        std::vector<Fixing> out;
        for (int k = 0; k < nb; ++k)
            if (fix[k] >= 0) out.push_back({binaries[k], double(fix[k]), double(fix[k])});
        return out;
    };

    const double prune_scale = 1e-9;
    auto prunable = [&](double bound) {
        return has_incumbent && bound <= incumbent + prune_scale * std::max(1.0, std::abs(incumbent));
    };

    auto pin_all = [&](const std::vector<double>& x, const std::vector<std::int8_t>* fix) {
        std::vector<Fixing> pinned;
        pinned.reserve(nb);
        for (int b = 0; b < nb; ++b) {
            const double v = fix && (*fix)[b] >= 0 ? (*fix)[b] : std::round(x[binaries[b]]);
            pinned.push_back({binaries[b], v, v});
        }
        return pinned;
    };
    auto offer = [&](const LpSolution& lp) {
        const double tie = 1e-12 * std::max(1.0, std::abs(incumbent));
        if (lp.status != LpStatus::optimal || (has_incumbent && lp.objective <= incumbent + tie)) return false;
        has_incumbent = true;
        incumbent = lp.objective;
        result.values = lp.values;
        result.objective = lp.objective;
        result.incumbent_history.push_back(incumbent);
        return true;
    };

    if (!opts.start.empty()) {
        if (static_cast<int>(opts.start.size()) != program.num_columns()) {
            throw StructuralError("start assignment has " + std::to_string(opts.start.size()) + " values, program has " +
                                  std::to_string(program.num_columns()) + " columns");
        }
        LpSolution lp = engines[0].solve(pin_all(opts.start, nullptr));
        result.lp_iterations += lp.iterations;
        if (offer(lp)) emit(log_line(0, kInf, true, incumbent, kInf));
    }

    OpenNodes open(opts.node_order);
    open.push(Node{std::vector<std::int8_t>(nb, -1), nullptr, kInf, 0, seq++});

    bool limit_hit = false;
    struct Evaluated {
        Node node;
        LpSolution lp;
        std::shared_ptr<const SimplexEngine::Basis> basis;
    };
    std::vector<Evaluated> batch;
    std::vector<Node> pending;

    while (!open.empty()) {
        if (result.nodes_explored >= opts.node_limit || elapsed() >= opts.time_limit) {
            limit_hit = true;
            break;
        }
        pending.clear();
        while (!open.empty() && static_cast<int>(pending.size()) < opts.worker_count &&
               result.nodes_explored + static_cast<long>(pending.size()) < opts.node_limit) {
            Node n = open.pop();
            if (prunable(n.bound)) continue;
            pending.push_back(std::move(n));
        }
        if (pending.empty()) continue;

        batch.assign(pending.size(), {});
        const auto count = static_cast<int>(pending.size());
#pragma omp parallel for num_threads(opts.worker_count) schedule(static, 1) if (count > 1)
        for (int k = 0; k < count; ++k) {
            auto fx = fixings_of(pending[k].fix);
            batch[k].lp = engines[k].solve(fx, pending[k].basis.get());
            batch[k].basis = std::make_shared<const SimplexEngine::Basis>(engines[k].basis());
        }

        for (int k = 0; k < count; ++k) {
            Node& node = pending[k];
            const LpSolution& lp = batch[k].lp;
            ++result.nodes_explored;
            result.lp_iterations += lp.iterations;
            if (result.nodes_explored == 1) result.root_bound = lp.status == LpStatus::optimal ? lp.objective : -kInf;

            if (lp.status == LpStatus::unbounded) {
                throw SolverError("LP relaxation is unbounded; the model is missing a bounding row");
            }
            if (lp.status == LpStatus::infeasible || prunable(lp.objective)) continue;

            int branch = -1;
            double branch_frac = 0;
            for (int b = 0; b < nb; ++b) {
                if (node.fix[b] >= 0) continue;
                const double v = lp.values[binaries[b]];
                const double frac = std::abs(v - std::round(v));
                if (frac <= opts.integrality_tol) continue;
                if (opts.branch_rule == BranchRule::lowest_index) {
                    branch = b;
                    break;
                }
                if (frac > branch_frac) {
                    branch_frac = frac;
                    branch = b;
                }
            }

            if (branch < 0) {
                // Integral within tolerance: re-solve with every binary pinned to its rounded value.
                LpSolution polished = engines[0].solve(pin_all(lp.values, &node.fix), batch[k].basis.get());
                result.lp_iterations += polished.iterations;
                if (polished.status == LpStatus::optimal) {
                    if (offer(polished)) {
                        const double bound = std::max({lp.objective, open.best_bound(), incumbent});
                        emit(log_line(result.nodes_explored, bound, true, incumbent, relative_gap(bound, incumbent)));
                    }
                    continue;
                }
                // Rounding broke feasibility; branch on the least integral free binary.
                for (int b = 0; b < nb; ++b) {
                    if (node.fix[b] >= 0) continue;
                    const double v = lp.values[binaries[b]];
                    const double frac = std::abs(v - std::round(v));
                    if (frac > branch_frac) {
                        branch_frac = frac;
                        branch = b;
                    }
                }
                if (branch < 0) continue;
            }

            const double v = lp.values[binaries[branch]];
            const std::int8_t first = v >= 0.5 ? 1 : 0;
            Node preferred{node.fix, batch[k].basis, lp.objective, node.depth + 1, 0};
            Node other{node.fix, batch[k].basis, lp.objective, node.depth + 1, 0};
            preferred.fix[branch] = first;
            other.fix[branch] = static_cast<std::int8_t>(1 - first);
            if (opts.node_order == NodeOrder::depth_first) {
                other.seq = seq++;
                preferred.seq = seq++;
                open.push(std::move(other));
                open.push(std::move(preferred));
            } else {
                preferred.seq = seq++;
                other.seq = seq++;
                open.push(std::move(preferred));
                open.push(std::move(other));
            }

            if (opts.log_interval > 0 && result.nodes_explored % opts.log_interval == 0) {
                const double bound = std::max({lp.objective, open.best_bound(), incumbent});
                emit(log_line(result.nodes_explored, bound, has_incumbent, incumbent,
                              has_incumbent ? relative_gap(bound, incumbent) : kInf));
            }
        }
    }

    const double open_bound = open.best_bound();
    if (!limit_hit || open.empty()) {
        result.status = has_incumbent ? MilpStatus::optimal : MilpStatus::infeasible;
        result.best_bound = has_incumbent ? incumbent : -kInf;
        result.gap = 0;
    } else {
        result.status = has_incumbent ? MilpStatus::feasible : MilpStatus::no_solution;
        result.best_bound = std::max(open_bound, incumbent);
        result.gap = has_incumbent ? relative_gap(result.best_bound, incumbent) : kInf;
    }
    if (!has_incumbent) result.values.clear();
    emit(log_line(result.nodes_explored, result.best_bound, has_incumbent, incumbent, result.gap));
    result.wall_time = elapsed();
    return result;
}

MilpSolution solve_milp(const ModelInstance& model, const SolverOptions& options) {
    return solve_milp(model.program, options);
}

}  // namespace bhca
