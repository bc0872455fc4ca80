#include "qecforge/sim/dem.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qecforge/sim/frame.h"
#include "qecforge/util/rng.h"

namespace qecforge {

std::vector<uint32_t> DemMechanism::detectors() const {
    std::vector<uint32_t> out;
    for (uint32_t id : symptom) {
        if (!symptom_is_obs(id)) {
            out.push_back(id);
        }
    }
    return out;
}

std::vector<uint32_t> DemMechanism::observables() const {
    std::vector<uint32_t> out;
    for (uint32_t id : symptom) {
        if (symptom_is_obs(id)) {
            out.push_back(symptom_obs_index(id));
        }
    }
    return out;
}

namespace {

using Sens = std::vector<uint32_t>;  // sorted symptom-id set

void xor_into(Sens &dst, const Sens &src) {
    if (src.empty()) {
        return;
    }
    Sens out;
    out.reserve(dst.size() + src.size());
    std::set_symmetric_difference(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(out));
    dst = std::move(out);
}

Sens xored(const Sens &a, const Sens &b) {
    Sens out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct SensitivityPass {
    std::vector<Sens> sx, sz;
    std::map<Sens, double> merged;

    void add_component(double p, const Sens &symptom) {
        if (p <= 0 || symptom.empty()) {
            return;
        }
        double &slot = merged[symptom];
        slot = slot + p - 2 * slot * p;
    }

    void back_h(uint32_t q) {
        std::swap(sx[q], sz[q]);
    }
    void back_s(uint32_t q) {
        xor_into(sx[q], sz[q]);
    }
    void back_cx(uint32_t c, uint32_t t) {
        xor_into(sx[c], sx[t]);
        xor_into(sz[t], sz[c]);
    }
};

}  // namespace

Dem compile_dem(const Circuit &c, bool approximate_disjoint) {
    ResolvedRecords rr = resolve_records(c);
    // record index -> symptom ids referencing it
    std::vector<Sens> rec_ids(c.num_measurements);
    for (uint32_t d = 0; d < rr.detectors.size(); d++) {
        for (uint32_t r : rr.detectors[d]) {
            rec_ids[r].push_back(d);
        }
    }
    for (uint32_t k = 0; k < rr.observables.size(); k++) {
        for (uint32_t r : rr.observables[k]) {
            rec_ids[r].push_back(kObsFlag | k);
        }
    }
    for (auto &ids : rec_ids) {
        std::sort(ids.begin(), ids.end());
    }

    SensitivityPass pass;
    pass.sx.assign(c.num_qubits, {});
    pass.sz.assign(c.num_qubits, {});
    uint32_t rec_idx = c.num_measurements;

    for (size_t ii = c.instructions.size(); ii-- > 0;) {
        const Instruction &inst = c.instructions[ii];
        const auto &ts = inst.targets;
        switch (inst.op) {
            case Op::X:
            case Op::Y:
            case Op::Z:
            case Op::TICK:
            case Op::DETECTOR:
            case Op::OBSERVABLE_INCLUDE:
                break;
            case Op::H:
                for (auto &t : ts) pass.back_h(t.value);
                break;
            case Op::S:
            case Op::S_DAG:
                for (auto &t : ts) pass.back_s(t.value);
                break;
            case Op::SX:
            case Op::SX_DAG:
                for (auto &t : ts) {
                    pass.back_h(t.value);
                    pass.back_s(t.value);
                    pass.back_h(t.value);
                }
                break;
            case Op::RZ:
                if ((int)inst.params[0] % 2 == 1) {
                    for (auto &t : ts) pass.back_s(t.value);
                }
                break;
            case Op::CX:
                for (size_t i = ts.size(); i; i -= 2) {
                    pass.back_cx(ts[i - 2].value, ts[i - 1].value);
                }
                break;
            case Op::CZ:
                for (size_t i = ts.size(); i; i -= 2) {
                    uint32_t a = ts[i - 2].value, b = ts[i - 1].value;
                    pass.back_h(b);
                    pass.back_cx(a, b);
                    pass.back_h(b);
                }
                break;
            case Op::SWAP:
                for (size_t i = ts.size(); i; i -= 2) {
                    std::swap(pass.sx[ts[i - 2].value], pass.sx[ts[i - 1].value]);
                    std::swap(pass.sz[ts[i - 2].value], pass.sz[ts[i - 1].value]);
                }
                break;
            case Op::RZZ:
                for (size_t i = ts.size(); i; i -= 2) {
                    uint32_t a = ts[i - 2].value, b = ts[i - 1].value;
                    pass.back_cx(a, b);
                    pass.back_s(b);
                    pass.back_cx(a, b);
                }
                break;
            case Op::M:
                for (size_t i = ts.size(); i-- > 0;) {
                    rec_idx--;
                    uint32_t q = ts[i].value;
                    xor_into(pass.sx[q], rec_ids[rec_idx]);
                    pass.sz[q].clear();
                }
                break;
            case Op::MR:
                for (size_t i = ts.size(); i-- > 0;) {
                    rec_idx--;
                    uint32_t q = ts[i].value;
                    pass.sx[q] = rec_ids[rec_idx];
                    pass.sz[q].clear();
                }
                break;
            case Op::R:
                for (auto &t : ts) {
                    pass.sx[t.value].clear();
                    pass.sz[t.value].clear();
                }
                break;
            case Op::X_ERROR:
                for (auto &t : ts) pass.add_component(inst.params[0], pass.sx[t.value]);
                break;
            case Op::Z_ERROR:
                for (auto &t : ts) pass.add_component(inst.params[0], pass.sz[t.value]);
                break;
            case Op::Y_ERROR:
                for (auto &t : ts) {
                    pass.add_component(inst.params[0], xored(pass.sx[t.value], pass.sz[t.value]));
                }
                break;
            case Op::DEPOLARIZE1:
                for (auto &t : ts) {
                    double p3 = inst.params[0] / 3.0;
                    pass.add_component(p3, pass.sx[t.value]);
                    pass.add_component(p3, pass.sz[t.value]);
                    pass.add_component(p3, xored(pass.sx[t.value], pass.sz[t.value]));
                }
                break;
            case Op::PAULI_CHANNEL_1:
                for (auto &t : ts) {
                    pass.add_component(inst.params[0], pass.sx[t.value]);
                    pass.add_component(inst.params[1], xored(pass.sx[t.value], pass.sz[t.value]));
                    pass.add_component(inst.params[2], pass.sz[t.value]);
                }
                break;
            case Op::DEPOLARIZE2: {
                if (!approximate_disjoint) {
                    throw std::invalid_argument(
                        "DEPOLARIZE2 is a correlated channel; compiling it requires approximate_disjoint");
                }
                double p15 = inst.params[0] / 15.0;
                for (size_t i = ts.size(); i; i -= 2) {
                    uint32_t qa = ts[i - 2].value, qb = ts[i - 1].value;
                    // Pauli on one side: I,X,Y,Z (0..3); skip II.
                    Sens comp_a[4] = {{}, pass.sx[qa], xored(pass.sx[qa], pass.sz[qa]), pass.sz[qa]};
                    Sens comp_b[4] = {{}, pass.sx[qb], xored(pass.sx[qb], pass.sz[qb]), pass.sz[qb]};
                    for (int pa = 0; pa < 4; pa++) {
                        for (int pb = 0; pb < 4; pb++) {
                            if (pa == 0 && pb == 0) {
                                continue;
                            }
                            pass.add_component(p15, xored(comp_a[pa], comp_b[pb]));
                        }
                    }
                }
                break;
            }
        }
    }

    Dem dem;
    dem.num_detectors = c.num_detectors;
    dem.num_observables = c.num_observables;
    size_t folded = 0;
    for (auto &[symptom, p] : pass.merged) {
        double q = p;
        if (q > 0.5) {
            q = 1.0 - q;
            folded++;
        }
        if (q <= 0) {
            continue;
        }
        dem.mechanisms.push_back(DemMechanism{q, symptom});
    }
    if (folded > 0) {
        dem.warnings.push_back(
            std::to_string(folded) + " mechanism(s) exceeded probability 1/2 after merging; folded to 1-p");
    }
    return dem;
}

std::string emit_dem(const Dem &dem) {
    std::string out;
    out += "# num_detectors: " + std::to_string(dem.num_detectors) + "\n";
    out += "# num_observables: " + std::to_string(dem.num_observables) + "\n";
    for (const DemMechanism &m : dem.mechanisms) {
        std::array<char, 40> buf;
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m.p);
        out += "error(";
        out.append(buf.data(), res.ptr);
        out += ")";
        for (uint32_t id : m.symptom) {
            if (symptom_is_obs(id)) {
                out += " L" + std::to_string(symptom_obs_index(id));
            } else {
                out += " D" + std::to_string(id);
            }
        }
        out += "\n";
    }
    return out;
}

Dem parse_dem(const std::string &text) {
    Dem dem;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    uint32_t max_det = 0, max_obs = 0;
    bool saw_det = false, saw_obs = false;
    while (std::getline(in, line)) {
        line_no++;
        auto fail = [&](const std::string &msg) -> void {
            throw std::invalid_argument("dem line " + std::to_string(line_no) + ": " + msg);
        };
        if (line.rfind("# num_detectors:", 0) == 0) {
            dem.num_detectors = (uint32_t)std::stoul(line.substr(16));
            continue;
        }
        if (line.rfind("# num_observables:", 0) == 0) {
            dem.num_observables = (uint32_t)std::stoul(line.substr(18));
            continue;
        }
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) {
            continue;
        }
        if (line.compare(a, 6, "error(") != 0) {
            fail("expected 'error(p) ...'");
        }
        size_t close = line.find(')', a);
        if (close == std::string::npos) {
            fail("missing ')'");
        }
        std::string ptok = line.substr(a + 6, close - a - 6);
        double p = 0;
        auto res = std::from_chars(ptok.data(), ptok.data() + ptok.size(), p);
        if (res.ec != std::errc() || res.ptr != ptok.data() + ptok.size()) {
            fail("bad probability '" + ptok + "'");
        }
        if (!(p > 0 && p <= 0.5)) {
            fail("mechanism probability must be in (0, 1/2]");
        }
        DemMechanism mech;
        mech.p = p;
        std::istringstream targets(line.substr(close + 1));
        std::string tok;
        while (targets >> tok) {
            if (tok[0] == 'D') {
                uint32_t d = (uint32_t)std::stoul(tok.substr(1));
                mech.symptom.push_back(d);
                max_det = std::max(max_det, d + 1);
                saw_det = true;
            } else if (tok[0] == 'L') {
                uint32_t k = (uint32_t)std::stoul(tok.substr(1));
                mech.symptom.push_back(kObsFlag | k);
                max_obs = std::max(max_obs, k + 1);
                saw_obs = true;
            } else {
                fail("bad symptom token '" + tok + "'");
            }
        }
        std::sort(mech.symptom.begin(), mech.symptom.end());
        mech.symptom.erase(std::unique(mech.symptom.begin(), mech.symptom.end()), mech.symptom.end());
        if (mech.symptom.empty()) {
            fail("mechanism with empty symptom");
        }
        dem.mechanisms.push_back(std::move(mech));
    }
    if (dem.num_detectors == 0 && saw_det) {
        dem.num_detectors = max_det;
    }
    if (dem.num_observables == 0 && saw_obs) {
        dem.num_observables = max_obs;
    }
    if (max_det > dem.num_detectors || max_obs > dem.num_observables) {
        throw std::invalid_argument("dem: symptom index exceeds declared counts");
    }
    return dem;
}

DemSample dem_sample(const Dem &dem, size_t shots, uint64_t seed, int threads) {
    DemSample out;
    out.detectors = ShotTable(shots, dem.num_detectors);
    out.observables = ShotTable(shots, dem.num_observables);
    size_t num_batches = (shots + 63) / 64;
    int nthreads = resolve_thread_count(threads);

    auto worker = [&](size_t batch) {
        size_t base = batch * 64;
        size_t cnt = std::min<size_t>(64, shots - base);
        for (size_t s = 0; s < cnt; s++) {
            size_t shot = base + s;
            for (size_t m = 0; m < dem.mechanisms.size(); m++) {
                if (keyed_unit(seed, 0xDE11ULL ^ shot, m) < dem.mechanisms[m].p) {
                    for (uint32_t id : dem.mechanisms[m].symptom) {
                        if (symptom_is_obs(id)) {
                            out.observables.flip(shot, symptom_obs_index(id));
                        } else {
                            out.detectors.flip(shot, id);
                        }
                    }
                }
            }
        }
    };

    if (nthreads <= 1 || num_batches <= 1) {
        for (size_t b = 0; b < num_batches; b++) {
            worker(b);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < nthreads; t++) {
            pool.emplace_back([&] {
                while (true) {
                    size_t b = next.fetch_add(1);
                    if (b >= num_batches) {
                        return;
                    }
                    worker(b);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    return out;
}

std::vector<double> dem_detector_marginals(const Dem &dem) {
    std::vector<double> acc(dem.num_detectors, 1.0);
    for (const DemMechanism &m : dem.mechanisms) {
        for (uint32_t id : m.symptom) {
            if (!symptom_is_obs(id)) {
                acc[id] *= 1.0 - 2.0 * m.p;
            }
        }
    }
    for (double &v : acc) {
        v = (1.0 - v) / 2.0;
    }
    return acc;
}

}  // namespace qecforge
