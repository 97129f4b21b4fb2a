#include "dataset_cache.hpp"

#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace rulekit {

namespace {

constexpr char kMagic[4] = {'R', 'K', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) {
      throw DataError("cannot open " + path.string() + " for writing");
    }
  }

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 8);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void finish() {
    out_.flush();
    if (!out_) {
      throw DataError("failed writing dataset cache to " + path_.string());
    }
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) {
      throw DataError("cannot open dataset cache " + path.string());
    }
  }

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw DataError("truncated dataset cache " + path_.string());
    }
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
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
    if (n > (1u << 26)) {
      throw DataError("implausible string length in dataset cache " + path_.string());
    }
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

void DatasetCache::write(const Dataset& data, const std::filesystem::path& path) {
  const DataTable& table = data.table();
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(table.mode()));
  w.u64(table.schema_fingerprint());

  if (table.mode() == DatasetMode::Text) {
    const Vocabulary& vocab = table.vocabulary();
    w.u32(vocab.corpus_size());
    w.u32(vocab.params().min_df);
    w.u8(static_cast<std::uint8_t>(vocab.params().ngram_min));
    w.u8(static_cast<std::uint8_t>(vocab.params().ngram_max));
    w.u32(static_cast<std::uint32_t>(vocab.size()));
    for (const Feature& f : vocab.features()) {
      w.str(f.gram);
      w.u32(f.document_frequency);
    }
  } else {
    w.u32(static_cast<std::uint32_t>(table.attributes().size()));
    for (const AttributeDecl& attr : table.attributes()) {
      w.str(attr.name);
      w.u8(attr.numeric ? 1 : 0);
      w.u32(static_cast<std::uint32_t>(attr.symbols.size()));
      for (const std::string& symbol : attr.symbols) {
        w.str(symbol);
      }
    }
  }

  w.u32(static_cast<std::uint32_t>(table.labels().size()));
  for (const std::string& label : table.labels()) {
    w.str(label);
  }

  w.u32(static_cast<std::uint32_t>(data.size()));
  for (std::uint32_t i = 0; i < data.size(); ++i) {
    const Row& row = data.row(i);
    w.str(row.id);
    w.u32(row.label);
    if (table.mode() == DatasetMode::Text) {
      w.u32(static_cast<std::uint32_t>(row.ranks.size()));
      for (std::uint32_t rank : row.ranks) {
        w.u32(rank);
      }
    } else {
      for (double v : row.values) {
        w.f64(v);
      }
    }
  }
  w.finish();
}

Dataset DatasetCache::read(const std::filesystem::path& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError(path.string() + " is not a rulekit dataset cache");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw DataError("dataset cache " + path.string() + " has unsupported version " +
                    std::to_string(version));
  }
  const std::uint8_t mode = r.u8();
  const std::uint64_t stored_fingerprint = r.u64();

  std::shared_ptr<const DataTable> table;
  std::vector<AttributeDecl> attributes;
  std::shared_ptr<const Vocabulary> vocabulary;

  if (mode == static_cast<std::uint8_t>(DatasetMode::Text)) {
    const std::uint32_t corpus_size = r.u32();
    VocabularyParams params;
    params.min_df = r.u32();
    params.ngram_min = r.u8();
    params.ngram_max = r.u8();
    const std::uint32_t count = r.u32();
    std::vector<Feature> features;
    features.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      Feature f;
      f.gram = r.str();
      f.document_frequency = r.u32();
      features.push_back(std::move(f));
    }
    vocabulary = std::make_shared<Vocabulary>(
        Vocabulary::from_parts(std::move(features), corpus_size, params));
  } else if (mode == static_cast<std::uint8_t>(DatasetMode::Tabular)) {
    const std::uint32_t count = r.u32();
    attributes.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      attributes[i].name = r.str();
      attributes[i].numeric = r.u8() == 1;
      const std::uint32_t n_symbols = r.u32();
      attributes[i].symbols.resize(n_symbols);
      for (std::uint32_t s = 0; s < n_symbols; ++s) {
        attributes[i].symbols[s] = r.str();
      }
    }
  } else {
    throw DataError("dataset cache " + path.string() + " has an unknown mode byte");
  }

  const std::uint32_t n_labels = r.u32();
  std::vector<std::string> labels(n_labels);
  for (std::uint32_t i = 0; i < n_labels; ++i) {
    labels[i] = r.str();
  }

  const std::uint32_t n_rows = r.u32();
  std::vector<Row> rows(n_rows);
  for (std::uint32_t i = 0; i < n_rows; ++i) {
    rows[i].id = r.str();
    rows[i].label = r.u32();
    if (mode == static_cast<std::uint8_t>(DatasetMode::Text)) {
      const std::uint32_t n_ranks = r.u32();
      rows[i].ranks.resize(n_ranks);
      for (std::uint32_t k = 0; k < n_ranks; ++k) {
        rows[i].ranks[k] = r.u32();
      }
    } else {
      rows[i].values.resize(attributes.size());
      for (std::size_t k = 0; k < attributes.size(); ++k) {
        rows[i].values[k] = r.f64();
      }
    }
  }

  if (mode == static_cast<std::uint8_t>(DatasetMode::Text)) {
    table = DataTable::text(std::move(vocabulary), std::move(labels), std::move(rows));
  } else {
    table = DataTable::tabular(std::move(attributes), std::move(labels), std::move(rows));
  }
  if (table->schema_fingerprint() != stored_fingerprint) {
    throw DataError("dataset cache " + path.string() + " fails its fingerprint check");
  }
  return Dataset(std::move(table));
}

}  // namespace rulekit
