#include "bhca/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "bhca/errors.hpp"

namespace bhca {

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

CompiledLp::CompiledLp(const LinearProgram& program) : n_(program.num_columns()) {
    lower_.resize(n_);
    upper_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        lower_[j] = program.columns[j].lower;
        upper_[j] = program.columns[j].upper;
    }
    obj_.assign(n_, 0.0);
    for (const auto& t : program.objective) obj_[t.column] += t.coef;
    cost_.resize(n_);
    for (int j = 0; j < n_; ++j) cost_[j] = -obj_[j];

    std::vector<const LinearConstraint*> kept;
    for (const auto& row : program.rows) {
        if (row.terms.empty()) {
            const bool ok = (row.sense == Sense::less_equal && 0.0 <= row.rhs) ||
                            (row.sense == Sense::greater_equal && 0.0 >= row.rhs) ||
                            (row.sense == Sense::equal && row.rhs == 0.0);
            if (!ok) trivially_infeasible_ = true;
            continue;
        }
        if (row.terms.size() == 1) {
            const auto [j, a] = row.terms.front();
            const double v = row.rhs / a;
            const bool upper_side = (row.sense == Sense::less_equal) == (a > 0);
            if (row.sense == Sense::equal) {
                lower_[j] = std::max(lower_[j], v);
                upper_[j] = std::min(upper_[j], v);
            } else if (upper_side) {
                upper_[j] = std::min(upper_[j], v);
            } else {
                lower_[j] = std::max(lower_[j], v);
            }
            continue;
        }
        kept.push_back(&row);
    }
    for (int j = 0; j < n_; ++j)
        if (lower_[j] > upper_[j]) trivially_infeasible_ = true;

    m_ = static_cast<int>(kept.size());
    row_lower_.resize(m_);
    row_upper_.resize(m_);
    std::vector<int> count(n_ + 1, 0);
    for (const auto* row : kept)
        for (const auto& t : row->terms) ++count[t.column + 1];
    col_start_.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
    row_index_.resize(col_start_[n_]);
    value_.resize(col_start_[n_]);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i) {
        const auto& row = *kept[i];
        double scale = 0;
        for (const auto& t : row.terms) scale = std::max(scale, std::abs(t.coef));
        scale = 1.0 / scale;
        for (const auto& t : row.terms) {
            row_index_[fill[t.column]] = i;
            value_[fill[t.column]++] = t.coef * scale;
        }
        const double rhs = row.rhs * scale;
        row_lower_[i] = row.sense == Sense::less_equal ? -kInf : rhs;
        row_upper_[i] = row.sense == Sense::greater_equal ? kInf : rhs;
    }
}

SimplexEngine::SimplexEngine(std::shared_ptr<const CompiledLp> lp, LpOptions options)
    : lp_(std::move(lp)), opt_(options) {
    n_ = lp_->n_;
    m_ = lp_->m_;
    total_ = n_ + m_;
    lb_.resize(total_);
    ub_.resize(total_);
    x_.assign(total_, 0.0);
    head_.resize(m_);
    pos_.assign(total_, -1);
    state_.assign(total_, at_lower);
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations : std::max<long>(20000, 50L * total_);
}

void SimplexEngine::place_nonbasic(int j) {
    const bool has_lower = std::isfinite(lb_[j]);
    const bool has_upper = std::isfinite(ub_[j]);
    std::uint8_t s = state_[j];
    if (s == at_upper && has_upper) {
        x_[j] = ub_[j];
    } else if (has_lower) {
        s = at_lower;
        x_[j] = lb_[j];
    } else if (has_upper) {
        s = at_upper;
        x_[j] = ub_[j];
    } else {
        s = free_zero;
        x_[j] = 0.0;
    }
    state_[j] = s;
    pos_[j] = -1;
}

void SimplexEngine::slack_basis() {
    for (int j = 0; j < n_; ++j) {
        state_[j] = at_lower;
        place_nonbasic(j);
    }
    for (int i = 0; i < m_; ++i) {
        head_[i] = n_ + i;
        state_[n_ + i] = basic;
        pos_[n_ + i] = i;
    }
}

bool SimplexEngine::install_basis(const Basis* warm) {
    if (warm == nullptr || static_cast<int>(warm->head.size()) != m_ || static_cast<int>(warm->state.size()) != total_) {
        return false;
    }
    int basics = 0;
    for (auto s : warm->state) basics += (s == basic);
    if (basics != m_) return false;
    state_ = warm->state;
    head_ = warm->head;
    std::fill(pos_.begin(), pos_.end(), -1);
    for (int i = 0; i < m_; ++i) {
        if (state_[head_[i]] != basic || pos_[head_[i]] != -1) return false;
        pos_[head_[i]] = i;
    }
    for (int j = 0; j < total_; ++j)
        if (state_[j] != basic) place_nonbasic(j);
    return true;
}

bool SimplexEngine::refactor() {
    etas_.clear();
    factored_ = false;
    if (m_ == 0) return true;
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < m_; ++k) {
        const int j = head_[k];
        if (j < n_) {
            for (int p = lp_->col_start_[j]; p < lp_->col_start_[j + 1]; ++p)
                trips.emplace_back(lp_->row_index_[p], k, lp_->value_[p]);
        } else {
            trips.emplace_back(j - n_, k, -1.0);
        }
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    B.setFromTriplets(trips.begin(), trips.end());
    B.makeCompressed();
    lu_.analyzePattern(B);
    lu_.factorize(B);
    factored_ = lu_.info() == Eigen::Success;
    return factored_;
}

void SimplexEngine::ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    v = lu_.solve(v);
    for (const auto& e : etas_) {
        const double xr = v[e.row] / e.pivot;
        if (xr != 0.0)
            for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * xr;
        v[e.row] = xr;
    }
}

void SimplexEngine::btran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = v[it->row];
        for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
        v[it->row] = s / it->pivot;
    }
    v = lu_.transpose().solve(v);
}

void SimplexEngine::load_column(int j, Eigen::VectorXd& v) const {
    v.setZero(m_);
    if (j < n_) {
        for (int p = lp_->col_start_[j]; p < lp_->col_start_[j + 1]; ++p) v[lp_->row_index_[p]] = lp_->value_[p];
    } else {
        v[j - n_] = -1.0;
    }
}

double SimplexEngine::column_dot(int j, const Eigen::VectorXd& y) const {
    if (j >= n_) return -y[j - n_];
    double s = 0;
    for (int p = lp_->col_start_[j]; p < lp_->col_start_[j + 1]; ++p) s += lp_->value_[p] * y[lp_->row_index_[p]];
    return s;
}

void SimplexEngine::recompute_basics() {
    // A x - r = 0  =>  B x_B = -N x_N
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < total_; ++j) {
        if (state_[j] == basic || x_[j] == 0.0) continue;
        if (j < n_) {
            for (int p = lp_->col_start_[j]; p < lp_->col_start_[j + 1]; ++p)
                rhs[lp_->row_index_[p]] -= lp_->value_[p] * x_[j];
        } else {
            rhs[j - n_] += x_[j];
        }
    }
    ftran(rhs);
    for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
}

double SimplexEngine::infeasibility() const {
    double worst = 0;
    for (int i = 0; i < m_; ++i) {
        const int v = head_[i];
        worst = std::max({worst, lb_[v] - x_[v], x_[v] - ub_[v]});
    }
    return worst;
}

SimplexEngine::PhaseResult SimplexEngine::run_phase(int phase, LpSolution& out) {
    const double ftol = opt_.feas_tol;
    const double otol = opt_.opt_tol;
    bool bland = false;
    int degenerate = 0;
    Eigen::VectorXd y(m_), alpha(m_);

    for (;; ++iterations_) {
        if (iterations_ > max_iterations_) throw SolverError("simplex iteration limit exceeded");
        if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
            if (!refactor()) throw SolverError("basis became singular during refactorization");
            recompute_basics();
        }

        if (phase == 1) {
            bool any = false;
            for (int i = 0; i < m_; ++i) {
                const int v = head_[i];
                y[i] = x_[v] < lb_[v] - ftol ? -1.0 : (x_[v] > ub_[v] + ftol ? 1.0 : 0.0);
                any = any || y[i] != 0.0;
            }
            if (!any) return PhaseResult::done;
        } else {
            for (int i = 0; i < m_; ++i) {
                const int v = head_[i];
                y[i] = v < n_ ? lp_->cost_[v] : 0.0;
            }
        }
        btran(y);

        // Pricing: Dantzig, or lowest eligible index under Bland's rule.
        int enter = -1;
        int dir = 0;
        double best = 0;
        for (int j = 0; j < total_; ++j) {
            const auto s = state_[j];
            if (s == basic || lb_[j] == ub_[j]) continue;
            const double c = (phase == 2 && j < n_) ? lp_->cost_[j] : 0.0;
            const double d = c - column_dot(j, y);
            int jdir = 0;
            if ((s == at_lower || s == free_zero) && d < -otol) jdir = 1;
            if ((s == at_upper || s == free_zero) && d > otol) jdir = -1;
            if (jdir == 0) continue;
            if (bland) {
                enter = j;
                dir = jdir;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                enter = j;
                dir = jdir;
            }
        }
        if (enter < 0) return phase == 1 ? PhaseResult::infeasible : PhaseResult::done;

        load_column(enter, alpha);
        ftran(alpha);

        // Ratio test. Basic i moves at rate g = -dir * alpha_i per unit step.
        auto limit_of = [&](int i, double g, double slack, double& bound) -> double {
            const int v = head_[i];
            const double xv = x_[v];
            if (g > 0) {
                if (phase == 1 && xv < lb_[v] - ftol) {
                    bound = lb_[v];
                } else if (xv > ub_[v] + ftol || !std::isfinite(ub_[v])) {
                    return kInf;
                } else {
                    bound = ub_[v];
                }
                return (bound + slack - xv) / g;
            }
            if (phase == 1 && xv > ub_[v] + ftol) {
                bound = ub_[v];
            } else if (xv < lb_[v] - ftol || !std::isfinite(lb_[v])) {
                return kInf;
            } else {
                bound = lb_[v];
            }
            return (bound - slack - xv) / g;
        };

        const double range = ub_[enter] - lb_[enter];
        int leave = -1;
        double step = kInf;
        double leave_bound = 0;
        if (!bland) {
            double relaxed_min = kInf;
            for (int i = 0; i < m_; ++i) {
                if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
                double bound;
                relaxed_min = std::min(relaxed_min, limit_of(i, -dir * alpha[i], ftol, bound));
            }
            if (relaxed_min < kInf) {
                double best_pivot = 0;
                for (int i = 0; i < m_; ++i) {
                    if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
                    double bound;
                    const double g = -dir * alpha[i];
                    const double exact = limit_of(i, g, 0.0, bound);
                    if (exact <= relaxed_min && std::abs(alpha[i]) > best_pivot) {
                        best_pivot = std::abs(alpha[i]);
                        leave = i;
                        leave_bound = bound;
                        step = std::max(0.0, exact);
                    }
                }
            }
        } else {
            for (int i = 0; i < m_; ++i) {
                if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
                double bound;
                const double r = std::max(0.0, limit_of(i, -dir * alpha[i], 0.0, bound));
                if (r == kInf) continue;
                const bool tie = leave >= 0 && std::abs(r - step) <= 1e-12 * (1.0 + step);
                if (leave < 0 || (r < step && !tie) || (tie && head_[i] < head_[leave])) {
                    leave = i;
                    leave_bound = bound;
                    step = r;
                }
            }
        }

        const bool flip = std::isfinite(range) && range <= step;
        if (flip) {
            step = range;
        } else if (leave < 0) {
            if (phase == 2) return PhaseResult::unbounded;
            throw SolverError("phase 1 ratio test found no blocking variable");
        }

        if (step != 0.0) {
            for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * step * alpha[i];
        }
        if (flip) {
            state_[enter] = dir > 0 ? at_upper : at_lower;
            x_[enter] = dir > 0 ? ub_[enter] : lb_[enter];
        } else {
            x_[enter] += dir * step;
            const int out_var = head_[leave];
            x_[out_var] = leave_bound;
            state_[out_var] = (leave_bound == lb_[out_var]) ? at_lower : at_upper;
            pos_[out_var] = -1;
            head_[leave] = enter;
            pos_[enter] = leave;
            state_[enter] = basic;

            Eta e{leave, alpha[leave], {}, {}};
            for (int i = 0; i < m_; ++i) {
                if (i != leave && std::abs(alpha[i]) > 1e-14) {
                    e.index.push_back(i);
                    e.value.push_back(alpha[i]);
                }
            }
            etas_.push_back(std::move(e));
        }

        if (step <= 1e-12) {
            if (++degenerate > opt_.degenerate_trigger && !bland) {
                bland = true;
                ++out.bland_activations;
            }
        } else {
            degenerate = 0;
            bland = false;
        }
    }
}

SimplexEngine::PhaseResult SimplexEngine::run_dual() {
    const double ftol = opt_.feas_tol;
    const double otol = opt_.opt_tol;
    const long cap = iterations_ + 10L * m_ + 100;
    Eigen::VectorXd y(m_), rho(m_), alpha(m_);
    std::vector<double> d(total_, 0.0);

    std::vector<double> row(total_, 0.0);
    bool fresh_duals = true;

    for (bool first = true;; first = false) {
        if (iterations_ >= cap || iterations_ >= max_iterations_) return PhaseResult::skipped;
        if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
            if (!refactor()) throw SolverError("basis became singular during refactorization");
            recompute_basics();
            fresh_duals = true;
        }

        if (fresh_duals) {
            // Reduced costs from scratch; between refactorizations they are updated along the pivot row.
            for (int i = 0; i < m_; ++i) y[i] = head_[i] < n_ ? lp_->cost_[head_[i]] : 0.0;
            btran(y);
            for (int j = 0; j < total_; ++j) {
                if (state_[j] == basic || lb_[j] == ub_[j]) continue;
                d[j] = (j < n_ ? lp_->cost_[j] : 0.0) - column_dot(j, y);
                if (!first) continue;
                const auto s = state_[j];
                const bool bad = (s == at_lower && d[j] < -otol) || (s == at_upper && d[j] > otol) ||
                                 (s == free_zero && std::abs(d[j]) > otol);
                if (bad) return PhaseResult::skipped;
            }
            fresh_duals = false;
        }

        int r = -1;
        double worst = ftol;
        bool below = false;
        for (int i = 0; i < m_; ++i) {
            const int v = head_[i];
            if (lb_[v] - x_[v] > worst) {
                worst = lb_[v] - x_[v];
                r = i;
                below = true;
            } else if (x_[v] - ub_[v] > worst) {
                worst = x_[v] - ub_[v];
                r = i;
                below = false;
            }
        }
        if (r < 0) return PhaseResult::done;

        rho.setZero();
        rho[r] = 1.0;
        btran(rho);

        // x_r moves by -a per unit of x_j; pick the entering column that keeps every reduced cost signed.
        int enter = -1;
        double best_ratio = kInf;
        double best_abs = 0;
        for (int j = 0; j < total_; ++j) {
            const auto s = state_[j];
            if (s == basic || lb_[j] == ub_[j]) continue;
            const double a = row[j] = column_dot(j, rho);
            if (std::abs(a) <= 1e-9) continue;
            const int dir = below ? (a < 0 ? 1 : -1) : (a > 0 ? 1 : -1);
            if (dir > 0 && s == at_upper) continue;
            if (dir < 0 && s == at_lower) continue;
            const double ratio = (dir > 0 ? std::max(0.0, d[j]) : std::max(0.0, -d[j])) / std::abs(a);
            const bool tie = std::abs(ratio - best_ratio) <= 1e-12 * (1.0 + ratio);
            if (ratio < best_ratio && !tie) {
                best_ratio = ratio;
                best_abs = std::abs(a);
                enter = j;
            } else if (tie && std::abs(a) > best_abs) {
                best_abs = std::abs(a);
                enter = j;
            }
        }
        if (enter < 0) return PhaseResult::infeasible;

        load_column(enter, alpha);
        ftran(alpha);
        if (std::abs(alpha[r]) <= opt_.pivot_tol) return PhaseResult::skipped;
        const int out_var = head_[r];
        const double step = d[enter] / row[enter];
        for (int j = 0; j < total_; ++j)
            if (state_[j] != basic && lb_[j] != ub_[j]) d[j] -= step * row[j];
        d[enter] = 0.0;
        d[out_var] = -step;
        const double bound = below ? lb_[out_var] : ub_[out_var];
        const double dx = (x_[out_var] - bound) / alpha[r];
        for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * dx;
        x_[enter] += dx;
        x_[out_var] = bound;
        state_[out_var] = below ? at_lower : at_upper;
        pos_[out_var] = -1;
        head_[r] = enter;
        pos_[enter] = r;
        state_[enter] = basic;

        Eta e{r, alpha[r], {}, {}};
        for (int i = 0; i < m_; ++i) {
            if (i != r && std::abs(alpha[i]) > 1e-14) {
                e.index.push_back(i);
                e.value.push_back(alpha[i]);
            }
        }
        etas_.push_back(std::move(e));
        ++iterations_;
    }
}

LpSolution SimplexEngine::solve(std::span<const Fixing> fixings, const Basis* warm_start) {
    LpSolution out;
    out.values.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        lb_[j] = lp_->lower_[j];
        ub_[j] = lp_->upper_[j];
    }
    for (int i = 0; i < m_; ++i) {
        lb_[n_ + i] = lp_->row_lower_[i];
        ub_[n_ + i] = lp_->row_upper_[i];
    }
    for (const auto& f : fixings) {
        lb_[f.column] = std::max(lb_[f.column], f.lower);
        ub_[f.column] = std::min(ub_[f.column], f.upper);
    }
    if (lp_->trivially_infeasible()) return out;
    for (int j = 0; j < n_; ++j) {
        if (lb_[j] > ub_[j] + opt_.feas_tol) return out;
        if (lb_[j] > ub_[j]) ub_[j] = lb_[j];
    }

    iterations_ = 0;
    // The live factorization (LU plus etas) is reused when the warm basis has the same basic set.
    const bool same_basis = factored_ && warm_start != nullptr && warm_start->head == head_;
    const bool installed = install_basis(warm_start);
    if (!installed) slack_basis();
    if ((!installed || !same_basis) && !refactor()) {
        slack_basis();
        if (!refactor()) throw SolverError("slack basis is singular");
    }
    recompute_basics();
    if (installed) run_dual();

    for (int attempt = 0;; ++attempt) {
        if (run_phase(1, out) == PhaseResult::infeasible) {
            out.status = LpStatus::infeasible;
            out.iterations = iterations_;
            basis_ = {head_, state_};
            return out;
        }
        if (run_phase(2, out) == PhaseResult::unbounded) {
            out.status = LpStatus::unbounded;
            out.iterations = iterations_;
            return out;
        }
        recompute_basics();
        if (infeasibility() <= opt_.feas_tol) break;
        if (!refactor()) throw SolverError("optimal basis is singular");
        recompute_basics();
        if (infeasibility() <= opt_.feas_tol || attempt >= 3) break;
    }

    out.status = LpStatus::optimal;
    out.iterations = iterations_;
    for (int j = 0; j < n_; ++j) out.values[j] = std::clamp(x_[j], lb_[j], ub_[j]);
    out.objective = 0;
    for (int j = 0; j < n_; ++j) out.objective += lp_->obj_[j] * out.values[j];
    basis_ = {head_, state_};
    return out;
}

LpSolution solve_lp(const LinearProgram& program, std::span<const Fixing> fixings, const LpOptions& options) {
    auto compiled = std::make_shared<const CompiledLp>(program);
    SimplexEngine engine(compiled, options);
    return engine.solve(fixings);
}

}  // namespace bhca
