// Binary checkpoint container. Raw IEEE-754 bytes keep the round trip bitwise.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include "flexline/a2c.hpp"
#include "flexline/textio.hpp"

namespace flexline {

namespace {

constexpr char kMagic[8] = {'F', 'L', 'X', 'C', 'K', 'P', 'T', '1'};

class Writer {
public:
    void raw(const void* p, std::size_t n) {
        out_.append(static_cast<const char*>(p), n);
    }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void i64(std::int64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void vec(const std::vector<double>& v) {
        u64(v.size());
        raw(v.data(), v.size() * sizeof(double));
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& bytes) : data_(bytes) {}
    void raw(void* p, std::size_t n) {
        if (pos_ + n > data_.size()) throw std::runtime_error("checkpoint: truncated");
        std::memcpy(p, data_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() { std::uint32_t v; raw(&v, sizeof v); return v; }
    std::uint64_t u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
    std::int64_t i64() { std::int64_t v; raw(&v, sizeof v); return v; }
    double f64() { double v; raw(&v, sizeof v); return v; }
    std::vector<double> vec() {
        std::uint64_t n = u64();
        if (n > (data_.size() - pos_) / sizeof(double)) {
            throw std::runtime_error("checkpoint: truncated array");
        }
        std::vector<double> v(n);
        raw(v.data(), n * sizeof(double));
        return v;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    const std::string& data_;
    std::size_t pos_ = 0;
};

void write_params(Writer& w, const MlpParams& p) {
    w.u32(static_cast<std::uint32_t>(p.desc.input_dim));
    w.u32(static_cast<std::uint32_t>(p.desc.hidden.size()));
    for (int h : p.desc.hidden) w.u32(static_cast<std::uint32_t>(h));
    w.u32(static_cast<std::uint32_t>(p.desc.output_dim));
    w.u32(static_cast<std::uint32_t>(p.weights.size()));
    for (const auto& layer : p.weights) w.vec(layer);
    for (const auto& layer : p.biases) w.vec(layer);
}

MlpParams read_params(Reader& r) {
    MlpParams p;
    p.desc.input_dim = static_cast<int>(r.u32());
    std::uint32_t nh = r.u32();
    p.desc.hidden.resize(nh);
    for (auto& h : p.desc.hidden) h = static_cast<int>(r.u32());
    p.desc.output_dim = static_cast<int>(r.u32());
    std::uint32_t layers = r.u32();
    for (std::uint32_t l = 0; l < layers; ++l) p.weights.push_back(r.vec());
    for (std::uint32_t l = 0; l < layers; ++l) p.biases.push_back(r.vec());
    return p;
}

void write_adam(Writer& w, const AdamState& a) {
    w.f64(a.learning_rate);
    w.f64(a.beta1);
    w.f64(a.beta2);
    w.f64(a.epsilon);
    w.i64(a.step);
    write_params(w, a.m);
    write_params(w, a.v);
}

AdamState read_adam(Reader& r) {
    AdamState a;
    a.learning_rate = r.f64();
    a.beta1 = r.f64();
    a.beta2 = r.f64();
    a.epsilon = r.f64();
    a.step = r.i64();
    a.m = read_params(r);
    a.v = read_params(r);
    return a;
}

}  // namespace

std::string save_checkpoint(const Checkpoint& ckpt) {
    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.u32(1);
    write_params(w, ckpt.policy);
    write_params(w, ckpt.value);
    write_params(w, ckpt.target);
    write_adam(w, ckpt.adam_policy);
    write_adam(w, ckpt.adam_value);
    w.u64(ckpt.rng_state);
    w.i64(ckpt.episodes_done);
    w.u32(static_cast<std::uint32_t>(ckpt.l_max));
    w.f64(ckpt.swtct_weight);
    w.f64(ckpt.overdue_penalty);
    w.f64(ckpt.discount);
    w.f64(ckpt.target_mix);
    return w.take();
}

Checkpoint load_checkpoint(const std::string& bytes) {
    Reader r(bytes);
    char magic[8];
    r.raw(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("checkpoint: bad magic");
    }
    if (r.u32() != 1) throw std::runtime_error("checkpoint: unsupported version");
    Checkpoint ckpt;
    ckpt.policy = read_params(r);
    ckpt.value = read_params(r);
    ckpt.target = read_params(r);
    ckpt.adam_policy = read_adam(r);
    ckpt.adam_value = read_adam(r);
    ckpt.rng_state = r.u64();
    ckpt.episodes_done = r.i64();
    ckpt.l_max = static_cast<int>(r.u32());
    ckpt.swtct_weight = r.f64();
    ckpt.overdue_penalty = r.f64();
    ckpt.discount = r.f64();
    ckpt.target_mix = r.f64();
    if (!r.done()) throw std::runtime_error("checkpoint: trailing bytes");
    return ckpt;
}

std::string training_log_csv(const std::vector<EpisodeLogRow>& rows) {
    std::string out = "episode,return,changeover_total,tardiness_total,overdue_count,mean_abs_td\n";
    for (const EpisodeLogRow& r : rows) {
        out += std::to_string(r.episode);
        out += ',';
        out += format_double(r.episode_return);
        out += ',';
        out += format_double(r.changeover_total);
        out += ',';
        out += format_double(r.tardiness_total);
        out += ',';
        out += std::to_string(r.overdue_count);
        out += ',';
        out += format_double(r.mean_abs_td);
        out += '\n';
    }
    return out;
}

}  // namespace flexline
