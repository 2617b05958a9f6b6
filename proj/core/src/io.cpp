#include "floc/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "floc/error.hpp"

namespace floc {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < width; ++k) v |= std::uint64_t{bytes[offset + k]} << (8 * k);
  return v;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedFile, what);
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoError, "failed reading '" + path.string() + "'");
  return bytes;
}

// Minimal pretty printer for the fixed record layouts below.
class JsonOut {
 public:
  std::string str() const { return out_; }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array(const char* key) {
    this->key(key);
    out_ += '[';
    first_.push_back(true);
    depth_.push_back(true);
  }
  void end_array() { close(']'); }
  void begin_object(const char* key) {
    this->key(key);
    out_ += '{';
    first_.push_back(true);
    depth_.push_back(false);
  }

  void field(const char* k, const std::string& v) {
    key(k);
    string(v); }
  void field(const char* k, const char* v) {
    key(k);
    string(v); }
  void field(const char* k, double v) {
    key(k);
    out_ += format_double(v); }
  void field(const char* k, std::uint64_t v) {
    key(k);
    out_ += std::to_string(v); }
  void field(const char* k, std::optional<double> v) {
    key(k);
    out_ += v ? format_double(*v) : "null";
  }
  void field(const char* k, const std::optional<std::string>& v) {
    key(k);
    if (v) {
      string(*v);
    } else {
      out_ += "null";
    }
  }
  void null_field(const char* k) {
    key(k);
    out_ += "null"; }

  template <typename T>
  void inline_array(const char* k, const std::vector<T>& values) {
    key(k);
    out_ += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ += ", ";
      if constexpr (std::is_floating_point_v<T>) {
        out_ += format_double(values[i]);
      } else if constexpr (std::is_same_v<T, std::string>) {
        string(values[i]);
      } else {
        out_ += std::to_string(values[i]);
      }
    }
    out_ += ']';
  }

  // Array element that is itself an object printed on one line.
  void begin_inline_element() {
    element();
    out_ += '{';
    first_.push_back(true);
    depth_.push_back(true);
    inline_ = true;
  }
  void end_inline_element() {
    out_ += '}';
    first_.pop_back();
    depth_.pop_back();
    inline_ = false;
  }

 private:
  void open(char c) {
    out_ += c;
    first_.push_back(true);
    depth_.push_back(false);
  }
  void close(char c) {
    const bool was_empty = first_.back();
    const bool compact = depth_.back();
    first_.pop_back();
    depth_.pop_back();
    if (!was_empty && !compact) newline();
    out_ += c;
  }
  void newline() {
    out_ += '\n';
    out_.append(2 * first_.size(), ' ');
  }
  void element() {
    if (!first_.back()) out_ += ',';
    if (depth_.back()) {
      if (!first_.back()) out_ += ' ';
    } else {
      newline();
    }
    first_.back() = false;
  }
  void key(const char* k) {
    if (inline_) {
      if (!first_.back()) out_ += ", ";
      first_.back() = false;
    } else {
      element();
    }
    string(k);
    out_ += ": ";
  }
  void string(const std::string& s) {
    out_ += '"';
    for (const char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  std::vector<bool> depth_;  // true = compact (single-line) container
  bool inline_ = false;
};

void write_record_body(JsonOut& j, const ResultRecord& r) {
  j.field("method", r.method);
  j.field("engine", r.engine.empty() ? std::optional<std::string>() : r.engine);
  j.begin_object("config");
  j.field("budget", static_cast<std::uint64_t>(r.budget));
  j.field("ratio", r.ratio);
  j.field("block_frames", r.block_frames);
  j.field("tokens_per_frame", static_cast<std::uint64_t>(r.tokens_per_frame));
  j.field("seed", r.seed);
  j.end_object();
  j.field("n", static_cast<std::uint64_t>(r.n));
  j.field("d", static_cast<std::uint64_t>(r.d));
  j.inline_array("sorted_indices", r.sorted_indices);
  j.inline_array("picks", r.picks);
  j.inline_array("gains", r.gains);
  j.field("objective_raw", r.objective_raw);
  j.field("objective_shifted", r.objective_shifted);
  j.field("selection_objective", r.selection_objective);
  j.field("avg_sum_coverage", r.avg_sum_coverage);
  j.field("avg_distance", r.avg_distance);
  if (r.z_avg_sum_coverage || r.z_avg_distance) {
    j.field("z_avg_sum_coverage", r.z_avg_sum_coverage);
    j.field("z_avg_distance", r.z_avg_distance);
  }
  if (r.wall_time_s) j.field("wall_time_s", *r.wall_time_s);
  j.field("evaluations", r.evaluations);
  j.inline_array("warnings", r.warnings);
  j.begin_array("blocks");
  for (const auto& b : r.blocks) {
    j.begin_inline_element();
    j.field("block", static_cast<std::uint64_t>(b.block));
    j.field("start", static_cast<std::uint64_t>(b.start));
    j.field("length", static_cast<std::uint64_t>(b.length));
    j.field("budget", static_cast<std::uint64_t>(b.budget));
    j.field("objective", b.objective);
    j.field("evaluations", b.evaluations);
    if (r.wall_time_s) j.field("wall_time_s", b.wall_time_s);
    j.end_inline_element();
  }
  j.end_array();
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::uint8_t> encode_embeddings(const TokenMatrix& tokens) {
  std::vector<std::uint8_t> out;
  out.reserve(kEmbeddingHeaderBytes + 4 * tokens.data().size());
  out.insert(out.end(), std::begin(kEmbeddingMagic), std::end(kEmbeddingMagic));
  put_u16(out, kEmbeddingVersion);
  put_u16(out, 0);
  put_u64(out, tokens.rows());
  put_u64(out, tokens.dim());
  for (const float x : tokens.data()) {
    const auto bits = std::bit_cast<std::uint32_t>(x);
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return out;
}

TokenMatrix decode_embeddings(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kEmbeddingHeaderBytes) {
    malformed("file holds " + std::to_string(bytes.size()) + " bytes, shorter than the " +
              std::to_string(kEmbeddingHeaderBytes) + "-byte header");
  }
  if (std::memcmp(bytes.data(), kEmbeddingMagic, 4) != 0) malformed("magic is not \"FLOC\"");
  const auto version = get_le(bytes, 4, 2);
  if (version != kEmbeddingVersion) {
    malformed("unsupported version " + std::to_string(version) + " (expected 1)");
  }
  const auto flags = get_le(bytes, 6, 2);
  if (flags != 0) malformed("flags must be 0, found " + std::to_string(flags));
  const std::uint64_t n = get_le(bytes, 8, 8);
  const std::uint64_t d = get_le(bytes, 16, 8);
  if (d == 0) malformed("dimension d must be >= 1");
  __extension__ using Wide = unsigned __int128;
  const Wide expected = static_cast<Wide>(n) * d * 4 + kEmbeddingHeaderBytes;
  if (expected != bytes.size()) {
    malformed("length " + std::to_string(bytes.size()) + " does not equal 24 + 4*n*d for n = " +
              std::to_string(n) + ", d = " + std::to_string(d));
  }
  std::vector<float> data(n * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(
        static_cast<std::uint32_t>(get_le(bytes, kEmbeddingHeaderBytes + 4 * i, 4)));
    if (!std::isfinite(data[i])) {
      malformed("row " + std::to_string(i / d) + " contains a NaN or Inf value");
    }
  }
  return TokenMatrix(n, d, std::move(data));
}

void write_embedding_file(const std::filesystem::path& path, const TokenMatrix& tokens) {
  const auto bytes = encode_embeddings(tokens);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
}

TokenMatrix read_embedding_file(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  try {
    return decode_embeddings(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

ResultRecord make_record(const TokenMatrix& tokens, const Selection& selection,
                         const QualityReport& report, const CompressionConfig& config,
                         bool include_timing) {
  ResultRecord r;
  r.method = selection.method;
  r.engine = selection.engine;
  r.n = tokens.rows();
  r.d = tokens.dim();
  r.budget = selection.sorted_indices.size();
  if (config.budget.is_ratio()) r.ratio = config.budget.to_string();
  r.block_frames = report.block_frames;
  r.tokens_per_frame = config.tokens_per_frame;
  r.seed = config.seed;
  r.sorted_indices = selection.sorted_indices;
  r.picks = selection.picks;
  r.gains = selection.gains;
  r.objective_raw = report.objective_raw;
  r.objective_shifted = report.objective_shifted;
  r.selection_objective = selection.objective;
  r.avg_sum_coverage = report.avg_sum_coverage;
  r.avg_distance = report.avg_distance;
  if (include_timing) r.wall_time_s = selection.wall_time_s;
  r.evaluations = selection.evaluations;
  r.warnings = selection.warnings;
  r.blocks = selection.blocks;
  return r;
}

std::string to_json(const ResultRecord& record) {
  JsonOut j;
  j.begin_object();
  write_record_body(j, record);
  j.end_object();
  return j.str() + "\n";
}

std::string to_json(std::span<const ResultRecord> records) {
  std::string body = "{\n  \"records\": [";
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string one = to_json(records[i]);
    one.pop_back();  // trailing newline
    std::string indented;
    for (const char c : one) {
      indented += c;
      if (c == '\n') indented += "    ";
    }
    body += (i ? ",\n    " : "\n    ") + indented;
  }
  body += records.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return body;
}

std::string to_json(const OracleRecord& record) {
  JsonOut j;
  j.begin_object();
  j.field("n", static_cast<std::uint64_t>(record.n));
  j.field("budget", static_cast<std::uint64_t>(record.budget));
  j.inline_array("optimum_subset", record.optimum.best_subset);
  j.field("optimum_value", record.optimum.best_value);
  j.field("subsets_evaluated", record.optimum.subsets_evaluated);
  j.inline_array("greedy_picks", record.greedy_picks);
  j.field("greedy_value", record.greedy_value);
  j.field("ratio", record.ratio);
  j.end_object();
  return j.str() + "\n";
}

std::vector<std::size_t> read_indices_file(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string text(bytes.begin(), bytes.end());
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<std::size_t> out;
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      const auto doc = nlohmann::json::parse(text);
      const auto& arr = doc.is_object() ? doc.at("sorted_indices") : doc;
      if (!arr.is_array()) malformed(path.string() + ": expected an array of token indices");
      for (const auto& v : arr) {
        if (!v.is_number_unsigned()) {
          malformed(path.string() + ": '" + v.dump() + "' is not a token index");
        }
        out.push_back(v.get<std::size_t>());
      }
    } catch (const nlohmann::json::exception& e) {
      malformed(path.string() + ": " + e.what());
    }
    return out;
  }
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != token.size() || token.front() == '-') {
      malformed(path.string() + ": '" + token + "' is not a token index");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
}

}  // namespace floc
