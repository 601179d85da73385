#include "argnet/model/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::model {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'A', 'R', 'G', 'N', 'E', 'T', 'C', 'K'};

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

    template <class T>
    T get() {
        T v;
        std::memcpy(&v, take(sizeof(T)), sizeof(T));
        return v;
    }

    const char* take(std::size_t n) {
        if (data_.size() - pos_ < n) throw CheckpointError("checkpoint " + path_ + " is truncated");
        const char* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

void copy_into(nn::Parameter& p, const nn::Matrix& m) {
    if (p.value.rows() != m.rows() || p.value.cols() != m.cols()) {
        throw CheckpointError("checkpoint tensor " + p.name + " has shape " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", model expects " + std::to_string(p.value.rows()) + "x" +
                              std::to_string(p.value.cols()));
    }
    p.value = m;
}

}  // namespace

const nn::Matrix* CheckpointData::find(std::string_view name) const noexcept {
    for (const auto& [n, m] : tensors) {
        if (n == name) return &m;
    }
    return nullptr;
}

void write_checkpoint(const std::filesystem::path& path, const std::string& kind, const nlohmann::json& meta,
                      const nn::ParameterSet& params) {
    std::string out(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kCheckpointMajor);
    put<std::uint32_t>(out, kCheckpointMinor);
    const std::string header = nlohmann::json{{"kind", kind}, {"meta", meta}}.dump();
    put<std::uint64_t>(out, header.size());
    out += header;
    put<std::uint64_t>(out, params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
        out += p.name;
        put<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.rows()));
        put<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.cols()));
        out.append(reinterpret_cast<const char*>(p.value.data()),
                   static_cast<std::size_t>(p.value.size()) * sizeof(double));
    }
    util::write_text_atomic(path, out);
}

CheckpointData read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(std::move(data), path.string());
    if (std::memcmp(r.take(sizeof(kMagic)), kMagic, sizeof(kMagic)) != 0) {
        throw CheckpointError(path.string() + " is not a checkpoint file");
    }
    CheckpointData ck;
    ck.major = static_cast<int>(r.get<std::uint32_t>());
    ck.minor = static_cast<int>(r.get<std::uint32_t>());
    if (ck.major != kCheckpointMajor) {
        throw CheckpointError("checkpoint format version " + std::to_string(ck.major) + "." +
                              std::to_string(ck.minor) + " is incompatible with supported version " +
                              std::to_string(kCheckpointMajor) + ".x");
    }
    const auto header_len = r.get<std::uint64_t>();
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(std::string_view(r.take(header_len), header_len));
        ck.kind = header.at("kind").get<std::string>();
        ck.meta = header.at("meta");
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError("checkpoint " + path.string() + " has a bad header: " + e.what());
    }
    const auto count = r.get<std::uint64_t>();
    for (std::uint64_t t = 0; t < count; ++t) {
        const auto name_len = r.get<std::uint32_t>();
        std::string name(r.take(name_len), name_len);
        const auto rows = static_cast<Eigen::Index>(r.get<std::uint64_t>());
        const auto cols = static_cast<Eigen::Index>(r.get<std::uint64_t>());
        nn::Matrix m(rows, cols);
        const std::size_t bytes = static_cast<std::size_t>(rows * cols) * sizeof(double);
        std::memcpy(m.data(), r.take(bytes), bytes);
        ck.tensors.emplace_back(std::move(name), std::move(m));
    }
    // Later minor versions may append sections; ignore what we do not know.
    return ck;
}

void load_parameters(const CheckpointData& ck, nn::ParameterSet& params) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const nn::Matrix* m = ck.find(params[i].name);
        if (!m) throw CheckpointError("checkpoint is missing tensor " + params[i].name);
        copy_into(params[i], *m);
    }
}

void load_parameters(const CheckpointData& ck, nn::ParameterSet& params, const std::vector<std::string>& prefixes) {
    std::size_t copied = 0;
    for (const auto& [name, m] : ck.tensors) {
        bool wanted = false;
        for (const auto& pre : prefixes) wanted = wanted || name.rfind(pre, 0) == 0;
        if (!wanted) continue;
        nn::Parameter* p = params.find(name);
        if (!p) throw CheckpointError("model has no parameter named " + name);
        copy_into(*p, m);
        ++copied;
    }
    if (copied == 0) throw CheckpointError("checkpoint holds no tensors with the requested prefixes");
}

}  // namespace argnet::model
