#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include "nextviz/dataset.hpp"
#include "nextviz/errors.hpp"

namespace nextviz {

namespace {

bool is_null_token(std::string_view s) {
  static constexpr std::string_view kNull[] = {"", "NA", "N/A", "NaN", "nan", "null", "NULL"};
  return std::find(std::begin(kNull), std::end(kNull), s) != std::end(kNull);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct Field {
  std::string text;
  bool quoted = false;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") text_.remove_prefix(3);
  }

  /// Next record, or false at end of input. Blank lines are skipped.
  bool next(std::vector<Field>& out) {
    out.clear();
    while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return false;
    record_line_ = line_;
    Field cur;
    while (true) {
      if (pos_ >= text_.size()) {
        out.push_back(std::move(cur));
        return true;
      }
      char c = text_[pos_];
      if (c == '"' && trim(cur.text).empty() && !cur.quoted) {
        cur.text.clear();
        cur.quoted = true;
        ++pos_;
        read_quoted(cur.text);
        continue;
      }
      if (c == ',') {
        out.push_back(std::move(cur));
        cur = Field{};
        ++pos_;
        continue;
      }
      if (c == '\r' || c == '\n') {
        if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
        ++pos_;
        ++line_;
        out.push_back(std::move(cur));
        return true;
      }
      if (cur.quoted) {
        // text after a closing quote is kept
        if (c != ' ' && c != '\t') cur.text.push_back(c);
      } else {
        cur.text.push_back(c);
      }
      ++pos_;
    }
  }

  std::size_t record_line() const { return record_line_; }

 private:
  void read_quoted(std::string& dst) {
    const std::size_t start_line = line_;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '"') {
        if (pos_ < text_.size() && text_[pos_] == '"') {
          dst.push_back('"');
          ++pos_;
          continue;
        }
        return;
      }
      if (c == '\n') ++line_;
      dst.push_back(c);
    }
    throw ParseError("unterminated quoted field starting on line " + std::to_string(start_line));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t record_line_ = 1;
};

}  // namespace

std::vector<RawColumn> read_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  Reader reader(text);
  std::vector<Field> record;
  if (!reader.next(record)) throw ParseError("empty file");

  std::vector<RawColumn> columns;
  std::set<std::string, std::less<>> seen;
  for (auto& f : record) {
    std::string name{trim(f.text)};
    if (name.empty()) throw ParseError("empty column name in header");
    if (!seen.insert(name).second) throw ParseError("duplicate column name: " + name);
    columns.push_back(RawColumn{std::move(name), {}});
  }

  while (reader.next(record)) {
    if (record.size() > columns.size()) {
      throw ParseError("line " + std::to_string(reader.record_line()) + ": " +
                       std::to_string(record.size()) + " fields, header has " +
                       std::to_string(columns.size()));
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c >= record.size()) {
        columns[c].cells.emplace_back(std::nullopt);
        continue;
      }
      const Field& f = record[c];
      const std::string_view v = f.quoted ? std::string_view(f.text) : trim(f.text);
      if (!f.quoted && is_null_token(v)) {
        columns[c].cells.emplace_back(std::nullopt);
      } else if (f.quoted && v.empty()) {
        columns[c].cells.emplace_back(std::nullopt);
      } else {
        columns[c].cells.emplace_back(std::string(v));
      }
    }
  }
  if (columns.front().cells.empty()) throw ParseError("no data rows");
  return columns;
}

DatasetPtr load_csv(std::istream& in, const LoadOptions& options) {
  return Dataset::from_columns(read_csv(in), options.overrides);
}

DatasetPtr load_csv(std::string_view text, const LoadOptions& options) {
  std::istringstream in{std::string(text)};
  return load_csv(in, options);
}

DatasetPtr load_csv_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return load_csv(in, options);
}

}  // namespace nextviz
