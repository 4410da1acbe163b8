#include "dll/train/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "dll/errors.hpp"

namespace dll {

namespace {

constexpr char kMagic[8] = {'D', 'L', 'L', 'C', 'K', 'P', 'T', '1'};

struct Writer {
    std::vector<std::uint8_t> out;

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out.insert(out.end(), s.begin(), s.end());
    }
    void tensor(const Tensor& t) {
        u32(static_cast<std::uint32_t>(t.rank()));
        for (std::size_t d = 0; d < t.rank(); ++d) u64(t.dim(d));
        for (std::size_t i = 0; i < t.size(); ++i) f64(static_cast<double>(t[i]));
    }
};

struct Reader {
    const std::vector<std::uint8_t>& in;
    std::size_t at = 0;

    void need(std::size_t n) {
        if (at + n > in.size()) throw FormatError("checkpoint truncated at byte " + std::to_string(at));
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(in[at + i]) << (8 * i);
        at += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(in[at + i]) << (8 * i);
        at += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(in.begin() + at, in.begin() + at + n);
        at += n;
        return s;
    }
    Tensor tensor() {
        const std::uint32_t rank = u32();
        if (rank > 8) throw FormatError("checkpoint tensor rank " + std::to_string(rank) + " is implausible");
        Shape shape(rank);
        std::size_t total = 1;
        for (auto& d : shape) {
            d = u64();
            total *= d;
        }
        need(total * 8);
        std::vector<scalar> data(total);
        for (auto& v : data) v = static_cast<scalar>(f64());
        return Tensor(std::move(shape), std::move(data));
    }
};

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
    Writer w;
    w.out.insert(w.out.end(), kMagic, kMagic + 8);
    w.u32(ckpt.version);
    w.u32(static_cast<std::uint32_t>(ckpt.params.size()));
    for (const auto& [name, tensor] : ckpt.params) {
        w.str(name);
        w.tensor(tensor);
    }
    w.u32(static_cast<std::uint32_t>(ckpt.optimizer.size()));
    for (const auto& [name, state] : ckpt.optimizer) {
        w.str(name);
        w.tensor(state.m);
        w.tensor(state.v);
        w.u64(state.t);
        w.f64(static_cast<double>(state.beta1));
        w.f64(static_cast<double>(state.beta2));
        w.f64(static_cast<double>(state.epsilon));
    }
    for (std::uint64_t word : ckpt.rng_cursor) w.u64(word);
    w.u64(ckpt.epoch);
    return std::move(w.out);
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw FormatError("checkpoint: bad magic");
    }
    Reader r{bytes, 8};
    Checkpoint ckpt;
    ckpt.version = r.u32();
    if (ckpt.version != 1) throw FormatError("checkpoint: unsupported version " + std::to_string(ckpt.version));
    const std::uint32_t n_params = r.u32();
    ckpt.params.reserve(n_params);
    for (std::uint32_t i = 0; i < n_params; ++i) {
        std::string name = r.str();
        Tensor t = r.tensor();
        ckpt.params.emplace_back(std::move(name), std::move(t));
    }
    const std::uint32_t n_opt = r.u32();
    ckpt.optimizer.reserve(n_opt);
    for (std::uint32_t i = 0; i < n_opt; ++i) {
        std::string name = r.str();
        AdamState s;
        s.m = r.tensor();
        s.v = r.tensor();
        s.t = r.u64();
        s.beta1 = static_cast<scalar>(r.f64());
        s.beta2 = static_cast<scalar>(r.f64());
        s.epsilon = static_cast<scalar>(r.f64());
        ckpt.optimizer.emplace_back(std::move(name), std::move(s));
    }
    for (auto& word : ckpt.rng_cursor) word = r.u64();
    ckpt.epoch = r.u64();
    if (r.at != bytes.size()) throw FormatError("checkpoint: trailing bytes");
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    const auto bytes = serialize_checkpoint(ckpt);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write checkpoint: " + tmp);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw InputError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw InputError("cannot move checkpoint into place: " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open checkpoint: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

}  // namespace dll
