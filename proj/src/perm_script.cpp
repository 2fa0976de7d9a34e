#include <cctype>
#include <sstream>

#include "galmon/errors.hpp"
#include "galmon/groups.hpp"

namespace galmon {

void export_perm_script(const std::vector<Permutation>& perms, std::string_view group_name, std::ostream& sink) {
  for (const auto& p : perms)
    if (p.degree() != perms.front().degree()) throw MixedDegree("perm-script: permutations differ in degree");
  for (std::size_t k = 0; k < perms.size(); ++k) {
    sink << 'p' << k << ":= PermList([";
    for (std::size_t i = 0; i < perms[k].degree(); ++i) sink << (i ? ", " : "") << perms[k][static_cast<Point>(i)] + 1;
    sink << "]);\n";
  }
  sink << group_name << ":=Group(";
  if (perms.empty()) sink << "()";
  for (std::size_t k = 0; k < perms.size(); ++k) sink << (k ? ", p" : "p") << k;
  sink << ");";
}

std::string export_perm_script(const std::vector<Permutation>& perms, std::string_view group_name) {
  std::ostringstream os;
  export_perm_script(perms, group_name, os);
  return os.str();
}

namespace {

class ScriptReader {
public:
  explicit ScriptReader(std::string_view text) : text_(text) {}

  std::vector<Permutation> read_all() {
    std::vector<Permutation> out;
    static constexpr std::string_view keyword = "PermList";
    while (pos_ < text_.size()) {
      if (text_.compare(pos_, keyword.size(), keyword) == 0 && word_boundary_before()) {
        advance(keyword.size());
        out.push_back(read_list());
      } else {
        advance(1);
      }
    }
    return out;
  }

private:
  bool word_boundary_before() const {
    if (pos_ == 0) return true;
    const char c = text_[pos_ - 1];
    return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance(1);
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    advance(1);
  }

  Point read_index() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a positive integer");
    const std::string digits(text_.substr(start, pos_ - start));
    col_ += pos_ - start;
    if (digits.size() > 9) fail("image out of range");
    const unsigned long v = std::stoul(digits);
    if (v == 0) fail("images are 1-based");
    return static_cast<Point>(v - 1);
  }

  Permutation read_list() {
    expect('(');
    expect('[');
    std::vector<Point> images;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] != ']') {
      images.push_back(read_index());
      for (skip_space(); pos_ < text_.size() && text_[pos_] == ','; skip_space()) {
        advance(1);
        images.push_back(read_index());
      }
    }
    expect(']');
    expect(')');
    return Permutation(std::move(images));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Permutation> parse_perm_script(std::string_view text) { return ScriptReader(text).read_all(); }

}  // namespace galmon
