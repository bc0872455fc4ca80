#include "qecforge/circuit/circuit.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qecforge {

namespace {

const std::array<OpInfo, 25> kOpTable = {{
    {"X", OpKind::gate1, 0},
    {"Y", OpKind::gate1, 0},
    {"Z", OpKind::gate1, 0},
    {"H", OpKind::gate1, 0},
    {"S", OpKind::gate1, 0},
    {"S_DAG", OpKind::gate1, 0},
    {"SX", OpKind::gate1, 0},
    {"SX_DAG", OpKind::gate1, 0},
    {"RZ", OpKind::gate1, 1},
    {"CX", OpKind::gate2, 0},
    {"CZ", OpKind::gate2, 0},
    {"SWAP", OpKind::gate2, 0},
    {"RZZ", OpKind::gate2, 0},
    {"M", OpKind::measure, 0},
    {"MR", OpKind::measure_reset, 0},
    {"R", OpKind::reset, 0},
    {"DEPOLARIZE1", OpKind::noise1, 1},
    {"DEPOLARIZE2", OpKind::noise2, 1},
    {"X_ERROR", OpKind::noise1, 1},
    {"Y_ERROR", OpKind::noise1, 1},
    {"Z_ERROR", OpKind::noise1, 1},
    {"PAULI_CHANNEL_1", OpKind::noise1, 3},
    {"TICK", OpKind::tick, 0},
    {"DETECTOR", OpKind::detector, 0},
    {"OBSERVABLE_INCLUDE", OpKind::observable, 1},
}};

const std::unordered_map<std::string, Op> &name_map() {
    static const auto *m = [] {
        auto *mp = new std::unordered_map<std::string, Op>();
        for (size_t i = 0; i < kOpTable.size(); i++) {
            (*mp)[kOpTable[i].name] = (Op)i;
        }
        return mp;
    }();
    return *m;
}

std::string format_double(double v) {
    std::array<char, 40> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " probability out of [0,1]: " + format_double(p));
    }
}

}  // namespace

const OpInfo &op_info(Op op) {
    return kOpTable[(size_t)op];
}

Op op_from_name(const std::string &name) {
    auto it = name_map().find(name);
    if (it == name_map().end()) {
        throw std::invalid_argument("unknown instruction name: '" + name + "'");
    }
    return it->second;
}

void Circuit::append(Op op, std::vector<Target> targets, std::vector<double> params) {
    const OpInfo &info = op_info(op);
    if (params.size() != info.num_params) {
        throw std::invalid_argument(
            std::string(info.name) + " takes " + std::to_string(info.num_params) + " parameter(s), got " +
            std::to_string(params.size()));
    }
    switch (info.kind) {
        case OpKind::gate1:
            if (op == Op::RZ) {
                double k = params[0];
                if (k != 0.0 && k != 1.0 && k != 2.0 && k != 3.0) {
                    throw std::invalid_argument("RZ exponent k must be one of {0,1,2,3}");
                }
            }
            [[fallthrough]];
        case OpKind::measure:
        case OpKind::measure_reset:
        case OpKind::reset:
        case OpKind::noise1:
            if (targets.empty()) {
                throw std::invalid_argument(std::string(info.name) + " needs at least one target");
            }
            for (const Target &t : targets) {
                if (t.is_rec) {
                    throw std::invalid_argument(std::string(info.name) + " takes qubit targets, not rec[-k]");
                }
            }
            if (op == Op::PAULI_CHANNEL_1) {
                double sum = 0;
                for (double p : params) {
                    check_probability(p, info.name);
                    sum += p;
                }
                if (sum > 1.0 + 1e-12) {
                    throw std::invalid_argument("PAULI_CHANNEL_1 component probabilities sum past 1");
                }
            } else if (info.kind == OpKind::noise1) {
                check_probability(params[0], info.name);
            }
            break;
        case OpKind::gate2:
        case OpKind::noise2:
            if (targets.empty() || targets.size() % 2 != 0) {
                throw std::invalid_argument(std::string(info.name) + " needs an even, nonzero target count");
            }
            for (const Target &t : targets) {
                if (t.is_rec) {
                    throw std::invalid_argument(std::string(info.name) + " takes qubit targets, not rec[-k]");
                }
            }
            for (size_t i = 0; i < targets.size(); i += 2) {
                if (targets[i].value == targets[i + 1].value) {
                    throw std::invalid_argument(std::string(info.name) + " pair targets must differ");
                }
            }
            if (info.kind == OpKind::noise2) {
                check_probability(params[0], info.name);
            }
            break;
        case OpKind::tick:
            if (!targets.empty()) {
                throw std::invalid_argument("TICK takes no targets");
            }
            break;
        case OpKind::detector:
        case OpKind::observable:
            if (op == Op::OBSERVABLE_INCLUDE) {
                double k = params[0];
                if (k < 0 || k != (double)(uint32_t)k) {
                    throw std::invalid_argument("OBSERVABLE_INCLUDE index must be a nonnegative integer");
                }
            }
            for (const Target &t : targets) {
                if (!t.is_rec) {
                    throw std::invalid_argument(std::string(info.name) + " takes only rec[-k] targets");
                }
                if (t.value == 0 || t.value > num_measurements) {
                    throw std::invalid_argument(
                        std::string(info.name) + " rec[-" + std::to_string(t.value) +
                        "] reaches before the first measurement");
                }
            }
            break;
    }

    for (const Target &t : targets) {
        if (!t.is_rec && t.value + 1 > num_qubits) {
            num_qubits = t.value + 1;
        }
    }
    if (op_produces_record(op)) {
        num_measurements += (uint32_t)targets.size();
    }
    if (op == Op::DETECTOR) {
        num_detectors++;
    }
    if (op == Op::OBSERVABLE_INCLUDE) {
        uint32_t idx = (uint32_t)params[0];
        if (idx + 1 > num_observables) {
            num_observables = idx + 1;
        }
    }
    instructions.push_back(Instruction{op, std::move(params), std::move(targets)});
}

void Circuit::append_circuit(const Circuit &other) {
    for (const Instruction &inst : other.instructions) {
        append(inst);
    }
}

std::string emit_instruction(const Instruction &inst) {
    std::string out = op_info(inst.op).name;
    if (!inst.params.empty()) {
        out += '(';
        for (size_t i = 0; i < inst.params.size(); i++) {
            if (i) {
                out += ',';
            }
            std::array<char, 40> buf;
            auto res = std::to_chars(buf.data(), buf.data() + buf.size(), inst.params[i]);
            out.append(buf.data(), res.ptr);
        }
        out += ')';
    }
    for (const Target &t : inst.targets) {
        out += ' ';
        if (t.is_rec) {
            out += "rec[-" + std::to_string(t.value) + "]";
        } else {
            out += std::to_string(t.value);
        }
    }
    return out;
}

std::string emit_circuit(const Circuit &c) {
    std::string out;
    for (const Instruction &inst : c.instructions) {
        out += emit_instruction(inst);
        out += '\n';
    }
    return out;
}

namespace {

struct Parser {
    const std::string &text;
    size_t pos = 0;
    size_t line_no = 1;

    explicit Parser(const std::string &text) : text(text) {}

    [[noreturn]] void fail(const std::string &msg) const {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
    }

    // Grabs the next line with comments stripped; false at end of input.
    bool next_line(std::string *out) {
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string::npos) {
                end = text.size();
            }
            std::string line = text.substr(pos, end - pos);
            pos = end + (end < text.size() ? 1 : 0);
            size_t hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            size_t a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos) {
                line_no++;
                continue;
            }
            size_t b = line.find_last_not_of(" \t\r");
            *out = line.substr(a, b - a + 1);
            return true;
        }
        return false;
    }
};

}  // namespace

Circuit parse_circuit(const std::string &text) {
    Circuit c;
    Parser p(text);
    std::string line;
    while (p.next_line(&line)) {
        size_t i = 0;
        while (i < line.size() && (isalnum((unsigned char)line[i]) || line[i] == '_')) {
            i++;
        }
        if (i == 0) {
            p.fail("expected instruction name");
        }
        std::string name = line.substr(0, i);
        Op op;
        try {
            op = op_from_name(name);
        } catch (const std::invalid_argument &e) {
            p.fail(e.what());
        }

        std::vector<double> params;
        if (i < line.size() && line[i] == '(') {
            size_t close = line.find(')', i);
            if (close == std::string::npos) {
                p.fail("missing ')' in parameter list");
            }
            std::string plist = line.substr(i + 1, close - i - 1);
            size_t start = 0;
            while (start <= plist.size()) {
                size_t comma = plist.find(',', start);
                std::string tok = plist.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                size_t a = tok.find_first_not_of(" \t");
                if (a == std::string::npos) {
                    p.fail("empty parameter");
                }
                size_t b = tok.find_last_not_of(" \t");
                tok = tok.substr(a, b - a + 1);
                double v;
                auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                    p.fail("bad parameter value '" + tok + "'");
                }
                params.push_back(v);
                if (comma == std::string::npos) {
                    break;
                }
                start = comma + 1;
            }
            i = close + 1;
        }

        std::vector<Target> targets;
        std::istringstream rest(line.substr(i));
        std::string tok;
        while (rest >> tok) {
            if (tok.rfind("rec[-", 0) == 0 && tok.back() == ']') {
                std::string num = tok.substr(5, tok.size() - 6);
                uint32_t k = 0;
                auto res = std::from_chars(num.data(), num.data() + num.size(), k);
                if (res.ec != std::errc() || res.ptr != num.data() + num.size() || k == 0) {
                    p.fail("bad record target '" + tok + "'");
                }
                targets.push_back(Target::rec(k));
            } else {
                uint32_t q = 0;
                auto res = std::from_chars(tok.data(), tok.data() + tok.size(), q);
                if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                    p.fail("bad target '" + tok + "'");
                }
                targets.push_back(Target::qubit(q));
            }
        }

        try {
            c.append(op, std::move(targets), std::move(params));
        } catch (const std::invalid_argument &e) {
            p.fail(e.what());
        }
        p.line_no++;
    }
    return c;
}

ResolvedRecords resolve_records(const Circuit &c) {
    ResolvedRecords out;
    out.detectors.reserve(c.num_detectors);
    out.observables.resize(c.num_observables);
    uint32_t meas_so_far = 0;
    for (const Instruction &inst : c.instructions) {
        if (op_produces_record(inst.op)) {
            meas_so_far += (uint32_t)inst.targets.size();
        } else if (inst.op == Op::DETECTOR) {
            std::vector<uint32_t> refs;
            refs.reserve(inst.targets.size());
            for (const Target &t : inst.targets) {
                refs.push_back(meas_so_far - t.value);
            }
            std::sort(refs.begin(), refs.end());
            out.detectors.push_back(std::move(refs));
        } else if (inst.op == Op::OBSERVABLE_INCLUDE) {
            uint32_t idx = (uint32_t)inst.params[0];
            for (const Target &t : inst.targets) {
                out.observables[idx].push_back(meas_so_far - t.value);
            }
        }
    }
    for (auto &obs : out.observables) {
        std::sort(obs.begin(), obs.end());
    }
    return out;
}

Circuit strip_noise(const Circuit &c) {
    Circuit out;
    for (const Instruction &inst : c.instructions) {
        if (!op_is_noise(inst.op)) {
            out.append(inst);
        }
    }
    return out;
}

uint32_t count_ops(const Circuit &c) {
    uint32_t n = 0;
    for (const Instruction &inst : c.instructions) {
        OpKind k = op_info(inst.op).kind;
        switch (k) {
            case OpKind::gate1:
            case OpKind::measure:
            case OpKind::measure_reset:
            case OpKind::reset:
                n += (uint32_t)inst.targets.size();
                break;
            case OpKind::gate2:
                n += (uint32_t)inst.targets.size() / 2;
                break;
            default:
                break;
        }
    }
    return n;
}

uint32_t count_2q_gates(const Circuit &c) {
    uint32_t n = 0;
    for (const Instruction &inst : c.instructions) {
        if (op_info(inst.op).kind == OpKind::gate2) {
            n += (uint32_t)inst.targets.size() / 2;
        }
    }
    return n;
}

uint32_t count_swaps(const Circuit &c) {
    uint32_t n = 0;
    for (const Instruction &inst : c.instructions) {
        if (inst.op == Op::SWAP) {
            n += (uint32_t)inst.targets.size() / 2;
        }
    }
    return n;
}

}  // namespace qecforge
