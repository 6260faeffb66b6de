#include "hoi/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hoi::io {

namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& field, double& out) {
    const std::string s = trim(field);
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        // from_chars does not accept "inf"/"nan" spellings everywhere; strtod
        // does, and we need those parsed so validation can reject them.
        char* sp = nullptr;
        out = std::strtod(begin, &sp);
        if (sp != end) return false;
    }
    return true;
}

TimeSeriesMatrix load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::string line;
    size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (first_content_line) {
            first_content_line = false;
            // A header is a row where not every field parses as a number.
            bool all_numeric = true;
            double tmp;
            for (const auto& f : fields)
                if (!parse_double(f, tmp)) { all_numeric = false; break; }
            if (!all_numeric) {
                for (const auto& f : fields) labels.push_back(trim(f));
                continue;
            }
        }
        std::vector<double> row;
        row.reserve(fields.size());
        const size_t data_row = rows.size() + 1;
        for (size_t c = 0; c < fields.size(); ++c) {
            double v;
            if (!parse_double(fields[c], v))
                throw Error(path.string() + ": unparseable value at (" +
                            std::to_string(data_row) + "," + std::to_string(c + 1) +
                            "): '" + trim(fields[c]) + "'");
            if (!std::isfinite(v))
                throw Error(path.string() + ": non-finite value at (" +
                            std::to_string(data_row) + "," + std::to_string(c + 1) + ")");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(path.string() + ": row " + std::to_string(data_row) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2 || rows.front().size() < 2)
        throw Error(path.string() + ": need at least 2 channels and 2 time points, got " +
                    std::to_string(rows.size()) + "x" +
                    std::to_string(rows.empty() ? 0 : rows.front().size()));

    TimeSeriesMatrix::Matrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return TimeSeriesMatrix(std::move(m), std::move(labels));
}

uint64_t read_le_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double read_le_f64(const unsigned char* p) {
    const uint64_t bits = read_le_u64(p);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

TimeSeriesMatrix load_raw(const std::filesystem::path& path) {
    const auto manifest_path = std::filesystem::path(path.string() + ".json");
    std::ifstream mf(manifest_path);
    if (!mf) throw Error("cannot open sidecar manifest " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(mf);
    } catch (const json::exception& e) {
        throw Error(manifest_path.string() + ": " + e.what());
    }
    if (!manifest.contains("channels") || !manifest.contains("timepoints"))
        throw Error(manifest_path.string() + ": manifest needs channels and timepoints");
    const int64_t c = manifest["channels"].get<int64_t>();
    const int64_t t = manifest["timepoints"].get<int64_t>();
    if (c < 2 || t < 2)
        throw Error(manifest_path.string() + ": need C >= 2 and T >= 2, got " +
                    std::to_string(c) + "x" + std::to_string(t));
    std::vector<std::string> labels;
    if (manifest.contains("labels") && !manifest["labels"].is_null())
        labels = manifest["labels"].get<std::vector<std::string>>();

    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    const size_t expect = static_cast<size_t>(c) * static_cast<size_t>(t) * 8;
    if (bytes.size() != expect)
        throw Error(path.string() + ": expected " + std::to_string(expect) + " bytes (" +
                    std::to_string(c) + "x" + std::to_string(t) + " f64), got " +
                    std::to_string(bytes.size()));

    TimeSeriesMatrix::Matrix m(c, t);
    for (int64_t i = 0; i < c; ++i)
        for (int64_t j = 0; j < t; ++j) {
            const double v = read_le_f64(bytes.data() + (i * t + j) * 8);
            if (!std::isfinite(v))
                throw Error(path.string() + ": non-finite value at (" + std::to_string(i + 1) +
                            "," + std::to_string(j + 1) + ")");
            m(i, j) = v;
        }
    return TimeSeriesMatrix(std::move(m), std::move(labels));
}

void append_le_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_f64(std::string& out, double d) {
    uint64_t bits;
    std::memcpy(&bits, &d, 8);
    append_le_u64(out, bits);
}

constexpr char kMagic[4] = {'H', 'O', 'I', 'T'};
constexpr uint32_t kVersion = 1;

}  // namespace

TimeSeriesMatrix load_timeseries(const std::filesystem::path& path, InputFormat format) {
    switch (format) {
        case InputFormat::Csv: return load_csv(path);
        case InputFormat::RawF64: return load_raw(path);
    }
    throw Error("unknown input format");
}

void write_tensor(const std::filesystem::path& path, const InteractionTensor& t) {
    std::string out;
    out.reserve(64 + t.entry_count() * (4 * t.order() + 8));
    out.append(kMagic, 4);
    append_le_u32(out, kVersion);
    out.push_back(static_cast<char>(t.order()));
    append_le_u32(out, t.num_channels());
    append_le_u64(out, t.entry_count());
    const std::string& tag = t.estimator_tag();
    if (tag.size() > 0xffff) throw Error("estimator tag too long");
    out.push_back(static_cast<char>(tag.size() & 0xff));
    out.push_back(static_cast<char>((tag.size() >> 8) & 0xff));
    out += tag;
    t.for_each([&](const TupleIndex& idx, double v) {
        for (int i = 0; i < t.order(); ++i) append_le_u32(out, idx[i]);
        append_le_f64(out, v);
    });

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write failed for " + path.string());
}

InteractionTensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    size_t pos = 0;
    auto need = [&](size_t n) {
        if (pos + n > bytes.size()) throw Error(path.string() + ": truncated tensor file");
    };
    need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw Error(path.string() + ": not a HOIT file");
    pos = 4;
    need(4);
    uint32_t version = 0;
    for (int i = 3; i >= 0; --i) version = (version << 8) | bytes[pos + i];
    pos += 4;
    if (version != kVersion)
        throw Error(path.string() + ": unsupported HOIT version " + std::to_string(version));
    need(1);
    const int order = bytes[pos++];
    need(4);
    uint32_t channels = 0;
    for (int i = 3; i >= 0; --i) channels = (channels << 8) | bytes[pos + i];
    pos += 4;
    need(8);
    const uint64_t count = read_le_u64(bytes.data() + pos);
    pos += 8;
    need(2);
    const uint16_t tag_len = static_cast<uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    need(tag_len);
    std::string tag(reinterpret_cast<const char*>(bytes.data() + pos), tag_len);
    pos += tag_len;

    InteractionTensor t(order, channels, tag);
    std::vector<uint32_t> idx(order);
    for (uint64_t e = 0; e < count; ++e) {
        need(4 * order + 8);
        for (int i = 0; i < order; ++i) {
            uint32_t v = 0;
            for (int b = 3; b >= 0; --b) v = (v << 8) | bytes[pos + b];
            pos += 4;
            idx[i] = v;
        }
        const double val = read_le_f64(bytes.data() + pos);
        pos += 8;
        t.set(TupleIndex(idx), val);
    }
    if (pos != bytes.size()) throw Error(path.string() + ": trailing bytes in tensor file");
    return t;
}

void write_matrix_csv(const std::filesystem::path& path, const PairwiseMatrix& m,
                      const std::vector<std::string>& labels) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    char buf[40];
    if (!labels.empty()) {
        for (uint32_t j = 0; j < m.num_channels(); ++j) {
            if (j) f << ',';
            f << labels[j];
        }
        f << '\n';
    }
    for (uint32_t i = 0; i < m.num_channels(); ++i) {
        for (uint32_t j = 0; j < m.num_channels(); ++j) {
            if (j) f << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            f << buf;
        }
        f << '\n';
    }
    if (!f) throw Error("write failed for " + path.string());
}

uint64_t file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string to_hex(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace hoi::io
