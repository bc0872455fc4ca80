#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qecforge/decode/decode.h"

namespace qecforge {

namespace {

constexpr double kMsgClamp = 1e3;
constexpr double kMinSumScale = 0.625;
constexpr bool kKeepBestIterate = false;

}  // namespace

CheckMatrix CheckMatrix::from_dem(const Dem &dem) {
    CheckMatrix h;
    h.num_checks = dem.num_detectors;
    h.num_observables = dem.num_observables;
    for (const auto &mech : dem.mechanisms) {
        uint64_t obs = 0;
        for (uint32_t o : mech.observables()) {
            if (o >= 64) throw std::invalid_argument("more than 64 observables");
            obs |= 1ULL << o;
        }
        h.cols.push_back(mech.detectors());
        h.col_obs.push_back(obs);
        h.prior.push_back(mech.p);
    }
    h.num_cols = h.cols.size();
    h.validate();
    return h;
}

CheckMatrix CheckMatrix::from_dense(const std::vector<std::vector<uint8_t>> &hrows,
                                    const std::vector<std::vector<uint8_t>> &lrows,
                                    const std::vector<double> &p) {
    CheckMatrix h;
    h.num_checks = hrows.size();
    h.num_cols = p.size();
    h.num_observables = lrows.size();
    h.cols.assign(h.num_cols, {});
    h.col_obs.assign(h.num_cols, 0);
    h.prior = p;
    for (uint32_t r = 0; r < h.num_checks; r++) {
        if (hrows[r].size() != h.num_cols) throw std::invalid_argument("ragged check matrix");
        for (uint32_t c = 0; c < h.num_cols; c++) {
            if (hrows[r][c]) h.cols[c].push_back(r);
        }
    }
    for (uint32_t r = 0; r < h.num_observables; r++) {
        if (lrows[r].size() != h.num_cols) throw std::invalid_argument("ragged observable matrix");
        for (uint32_t c = 0; c < h.num_cols; c++) {
            if (lrows[r][c]) h.col_obs[c] |= 1ULL << r;
        }
    }
    h.validate();
    return h;
}

void CheckMatrix::validate() const {
    if (cols.size() != num_cols || col_obs.size() != num_cols || prior.size() != num_cols) {
        throw std::invalid_argument("check matrix columns out of alignment");
    }
    for (uint32_t c = 0; c < num_cols; c++) {
        if (cols[c].empty() && col_obs[c] == 0) {
            throw std::invalid_argument("column " + std::to_string(c) + " is empty");
        }
        for (uint32_t r : cols[c]) {
            if (r >= num_checks) throw std::invalid_argument("check row out of range");
        }
        if (!(prior[c] >= 0.0 && prior[c] <= 1.0)) {
            throw std::invalid_argument("prior out of [0,1]");
        }
    }
}

BposdVariant bposd_variant_from_name(const std::string &name) {
    if (name == "parity_check" || name == "parity-check") return BposdVariant::parity_check;
    if (name == "batch") return BposdVariant::batch;
    throw std::invalid_argument("unknown decoder variant: " + name);
}

std::string bposd_variant_name(BposdVariant v) {
    return v == BposdVariant::parity_check ? "parity_check" : "batch";
}

namespace {

// Reusable workspace so batch decoding does not reallocate per shot.
struct BpWorkspace {
    struct Slot {
        uint32_t col;
        uint32_t at;  // index of this check within the column's check list
    };

    const CheckMatrix &h;
    std::vector<std::vector<uint32_t>> rows;      // columns touching each check
    std::vector<std::vector<Slot>> row_slots;      // same adjacency with column offsets
    std::vector<double> llr0;                      // prior log-likelihood ratios
    std::vector<std::vector<double>> to_check;     // per column: msg to each of its checks
    std::vector<std::vector<double>> to_var;       // per column: msg from each of its checks
    std::vector<double> posterior;
    std::vector<uint8_t> hard;

    explicit BpWorkspace(const CheckMatrix &hh) : h(hh) {
        rows.assign(h.num_checks, {});
        row_slots.assign(h.num_checks, {});
        for (uint32_t c = 0; c < h.num_cols; c++) {
            for (uint32_t at = 0; at < h.cols[c].size(); at++) {
                uint32_t r = h.cols[c][at];
                rows[r].push_back(c);
                row_slots[r].push_back({c, at});
            }
        }
        llr0.resize(h.num_cols);
        for (uint32_t c = 0; c < h.num_cols; c++) llr0[c] = mechanism_weight(h.prior[c]);
        to_check.assign(h.num_cols, {});
        to_var.assign(h.num_cols, {});
        for (uint32_t c = 0; c < h.num_cols; c++) {
            to_check[c].assign(h.cols[c].size(), 0);
            to_var[c].assign(h.cols[c].size(), 0);
        }
        posterior.resize(h.num_cols);
        hard.resize(h.num_cols);
    }

    uint32_t unsatisfied_checks(const std::vector<uint8_t> &events) const {
        uint32_t bad = 0;
        for (uint32_t r = 0; r < h.num_checks; r++) {
            uint8_t parity = 0;
            for (uint32_t c : rows[r]) parity ^= hard[c];
            if (parity != events[r]) bad++;
        }
        return bad;
    }

    // Runs min-sum BP; returns true if the hard decision satisfies the
    // syndrome before max_iters runs out. When it never does, `posterior`
    // is left at the iterate with the fewest unsatisfied checks, which is
    // a far better ranking signal for OSD than the final oscillation.
    bool run(const std::vector<uint8_t> &events, uint32_t max_iters) {
        for (uint32_t c = 0; c < h.num_cols; c++) {
            std::fill(to_check[c].begin(), to_check[c].end(), llr0[c]);
            std::fill(to_var[c].begin(), to_var[c].end(), 0.0);
            posterior[c] = llr0[c];
            hard[c] = llr0[c] < 0;
        }
        uint32_t best_bad = unsatisfied_checks(events);
        if (best_bad == 0) return true;
        std::vector<double> best_posterior = posterior;
        for (uint32_t iter = 0; iter < max_iters; iter++) {
            // check update: for each check, combine incoming var messages
            for (uint32_t r = 0; r < h.num_checks; r++) {
                double min1 = kMsgClamp, min2 = kMsgClamp;
                uint32_t argmin = UINT32_MAX;
                int sign = events[r] ? -1 : 1;
                for (const Slot &s : row_slots[r]) {
                    double msg = to_check[s.col][s.at];
                    if (msg < 0) sign = -sign;
                    double mag = std::fabs(msg);
                    if (mag < min1) {
                        min2 = min1;
                        min1 = mag;
                        argmin = s.col;
                    } else if (mag < min2) {
                        min2 = mag;
                    }
                }
                for (const Slot &s : row_slots[r]) {
                    double msg = to_check[s.col][s.at];
                    int sg = sign;
                    if (msg < 0) sg = -sg;
                    double mag = (s.col == argmin) ? min2 : min1;
                    to_var[s.col][s.at] = kMinSumScale * sg * mag;
                }
            }
            // var update + posterior
            for (uint32_t c = 0; c < h.num_cols; c++) {
                double total = llr0[c];
                for (double m : to_var[c]) total += m;
                posterior[c] = std::clamp(total, -kMsgClamp, kMsgClamp);
                hard[c] = posterior[c] < 0;
                for (size_t at = 0; at < h.cols[c].size(); at++) {
                    to_check[c][at] =
                        std::clamp(total - to_var[c][at], -kMsgClamp, kMsgClamp);
                }
            }
            uint32_t bad = unsatisfied_checks(events);
            if (bad == 0) return true;
            if (kKeepBestIterate && bad < best_bad) {
                best_bad = bad;
                best_posterior = posterior;
            }
        }
        if (kKeepBestIterate) {
            posterior = best_posterior;
            for (uint32_t c = 0; c < h.num_cols; c++) hard[c] = posterior[c] < 0;
        }
        return false;
    }

    // Ordered-statistics post-processing on the current posteriors.
    std::vector<uint8_t> osd(const std::vector<uint8_t> &events, uint32_t osd_order) {
        uint32_t n = h.num_cols, m = h.num_checks;
        std::vector<uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            return posterior[a] < posterior[b];  // most likely flipped first
        });

        // Column-ordered GF(2) elimination over [H | s].
        std::vector<std::vector<uint8_t>> mat(m, std::vector<uint8_t>(n + 1, 0));
        for (uint32_t c = 0; c < n; c++) {
            for (uint32_t r : h.cols[c]) mat[r][c] = 1;
        }
        for (uint32_t r = 0; r < m; r++) mat[r][n] = events[r];

        std::vector<uint32_t> pivot_col;
        std::vector<uint32_t> pivot_row;
        std::vector<uint8_t> is_pivot(n, 0);
        uint32_t rank = 0;
        for (uint32_t oc = 0; oc < n && rank < m; oc++) {
            uint32_t c = order[oc];
            uint32_t sel = m;
            for (uint32_t r = rank; r < m; r++) {
                if (mat[r][c]) {
                    sel = r;
                    break;
                }
            }
            if (sel == m) continue;
            std::swap(mat[rank], mat[sel]);
            for (uint32_t r = 0; r < m; r++) {
                if (r != rank && mat[r][c]) {
                    for (uint32_t k = 0; k <= n; k++) mat[r][k] ^= mat[rank][k];
                }
            }
            pivot_col.push_back(c);
            pivot_row.push_back(rank);
            is_pivot[c] = 1;
            rank++;
        }

        // Free columns in reliability order; the first osd_order get swept.
        std::vector<uint32_t> free_cols;
        for (uint32_t oc = 0; oc < n; oc++) {
            if (!is_pivot[order[oc]]) free_cols.push_back(order[oc]);
        }
        uint32_t sweep = std::min<uint32_t>(osd_order, free_cols.size());

        std::vector<uint8_t> best;
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<uint8_t> e(n, 0);
        for (uint64_t pattern = 0; pattern < (uint64_t(1) << sweep); pattern++) {
            std::fill(e.begin(), e.end(), 0);
            for (uint32_t i = 0; i < sweep; i++) {
                if ((pattern >> i) & 1) e[free_cols[i]] = 1;
            }
            // solve pivots against the residual syndrome
            for (uint32_t pi = 0; pi < rank; pi++) {
                uint32_t r = pivot_row[pi];
                uint8_t v = mat[r][n];
                for (uint32_t i = 0; i < sweep; i++) {
                    if (e[free_cols[i]]) v ^= mat[r][free_cols[i]];
                }
                e[pivot_col[pi]] = v;
            }
            double cost = 0;
            for (uint32_t c = 0; c < n; c++) {
                if (e[c]) cost += posterior[c];
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = e;
            }
        }
        return best;
    }
};

uint64_t obs_of(const CheckMatrix &h, const std::vector<uint8_t> &e) {
    uint64_t obs = 0;
    for (uint32_t c = 0; c < h.num_cols; c++) {
        if (e[c]) obs ^= h.col_obs[c];
    }
    return obs;
}

BposdResult decode_with(BpWorkspace &ws, const CheckMatrix &h,
                        const std::vector<uint8_t> &events, const BposdOptions &opts) {
    if (events.size() != h.num_checks) {
        throw std::invalid_argument("event vector length does not match check count");
    }
    BposdResult r;
    r.converged = ws.run(events, opts.max_iters);
    if (r.converged) {
        r.error = ws.hard;
    } else {
        r.error = ws.osd(events, opts.osd_order);
    }
    r.obs = obs_of(h, r.error);
    return r;
}

}  // namespace

BposdResult bposd_decode(const CheckMatrix &h, const std::vector<uint8_t> &events,
                         const BposdOptions &opts) {
    BpWorkspace ws(h);
    return decode_with(ws, h, events, opts);
}

ShotTable bposd_decode_batch(const CheckMatrix &h, const ShotTable &dets,
                             const BposdOptions &opts, int threads) {
    if (dets.bits_per_shot != h.num_checks) {
        throw std::invalid_argument("shot table width does not match check count");
    }
    ShotTable preds(dets.shots, h.num_observables);
    size_t nthreads = threads > 0 ? threads : std::thread::hardware_concurrency();
    nthreads = std::max<size_t>(1, std::min(nthreads, dets.shots ? dets.shots : 1));
    auto worker = [&](size_t t) {
        // batch keeps one workspace alive for the whole stripe;
        // parity_check builds one per shot (same numbers, more setup)
        std::unique_ptr<BpWorkspace> ws;
        if (opts.variant == BposdVariant::batch) ws = std::make_unique<BpWorkspace>(h);
        std::vector<uint8_t> events(h.num_checks);
        for (size_t shot = t; shot < dets.shots; shot += nthreads) {
            for (uint32_t i = 0; i < h.num_checks; i++) events[i] = dets.get(shot, i);
            BposdResult r;
            if (opts.variant == BposdVariant::batch) {
                r = decode_with(*ws, h, events, opts);
            } else {
                r = bposd_decode(h, events, opts);
            }
            for (uint32_t o = 0; o < h.num_observables; o++) {
                if ((r.obs >> o) & 1) preds.flip(shot, o);
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nthreads; t++) pool.emplace_back(worker, t);
        for (auto &th : pool) th.join();
    }
    return preds;
}

BruteForceResult brute_force_decode(const CheckMatrix &h, const std::vector<uint8_t> &events) {
    if (h.num_cols > 24) {
        throw std::invalid_argument("brute force capped at 24 mechanisms, got " +
                                    std::to_string(h.num_cols));
    }
    if (events.size() != h.num_checks) {
        throw std::invalid_argument("event vector length does not match check count");
    }
    size_t words = (h.num_checks + 63) / 64 + (h.num_checks == 0 ? 1 : 0);
    std::vector<std::vector<uint64_t>> colmask(h.num_cols, std::vector<uint64_t>(words, 0));
    for (uint32_t c = 0; c < h.num_cols; c++) {
        for (uint32_t r : h.cols[c]) colmask[c][r >> 6] |= 1ULL << (r & 63);
    }
    std::vector<uint64_t> target(words, 0);
    for (uint32_t r = 0; r < h.num_checks; r++) {
        if (events[r]) target[r >> 6] |= 1ULL << (r & 63);
    }
    std::vector<double> w(h.num_cols);
    for (uint32_t c = 0; c < h.num_cols; c++) w[c] = mechanism_weight(h.prior[c]);

    // lexicographically smaller error vector: at the lowest differing
    // index, has a 0 where the other has a 1
    auto lex_less = [](uint32_t a, uint32_t b) {
        uint32_t diff = a ^ b;
        if (!diff) return false;
        uint32_t low = diff & -diff;
        return (a & low) == 0;
    };

    BruteForceResult best;
    double cur_w = 0;
    std::vector<uint64_t> cur(words, 0);
    uint32_t mask = 0;
    uint64_t total = uint64_t(1) << h.num_cols;
    uint32_t best_mask = 0;
    constexpr double kTieEps = 1e-9;
    for (uint64_t g = 0; g < total; g++) {
        if (g) {
            // Gray code: toggle one column per step
            uint32_t bit = std::countr_zero(g);
            uint32_t c = bit;
            for (size_t k = 0; k < words; k++) cur[k] ^= colmask[c][k];
            if ((mask >> c) & 1) {
                cur_w -= w[c];
            } else {
                cur_w += w[c];
            }
            mask ^= 1u << c;
        }
        if (cur != target) continue;
        if (!best.feasible || cur_w < best.weight - kTieEps) {
            best.feasible = true;
            best.weight = cur_w;
            best_mask = mask;
            best.unique = true;
        } else if (cur_w <= best.weight + kTieEps) {
            best.unique = false;
            best.weight = std::min(best.weight, cur_w);
            if (lex_less(mask, best_mask)) best_mask = mask;
        }
    }
    if (best.feasible) {
        best.error.assign(h.num_cols, 0);
        for (uint32_t c = 0; c < h.num_cols; c++) {
            if ((best_mask >> c) & 1) best.error[c] = 1;
        }
        best.obs = obs_of(h, best.error);
    }
    return best;
}

RateEstimate logical_error_rate(const ShotTable &predictions, const ShotTable &actual) {
    if (predictions.shots != actual.shots ||
        predictions.bits_per_shot != actual.bits_per_shot) {
        throw std::invalid_argument("prediction and actual tables differ in shape");
    }
    RateEstimate est;
    est.shots = predictions.shots;
    size_t wps = predictions.words_per_shot();
    for (size_t s = 0; s < predictions.shots; s++) {
        const uint64_t *a = predictions.row(s);
        const uint64_t *b = actual.row(s);
        bool mismatch = false;
        for (size_t k = 0; k < wps; k++) {
            if (a[k] != b[k]) {
                mismatch = true;
                break;
            }
        }
        if (mismatch) est.failures++;
    }
    if (est.shots) {
        est.rate = static_cast<double>(est.failures) / est.shots;
        est.stderr_ = std::sqrt(est.rate * (1.0 - est.rate) / est.shots);
    }
    return est;
}

}  // namespace qecforge
