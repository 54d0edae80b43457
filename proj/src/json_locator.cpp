// Copyright 2026 The ITEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "json_locator.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

#include "item/error.hpp"
#include "json.hpp"

namespace item::internal {
namespace {

using nlohmann::json;

// Forward iterator that counts newlines as the parser consumes them.
class CountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) {
    return a.p_ == b.p_;
  }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) {
    return a.p_ != b.p_;
  }

 private:
  const char* p_ = nullptr;
  std::size_t* line_ = nullptr;
};

std::string Escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class LineSax : public nlohmann::json_sax<json> {
 public:
  LineSax(std::string_view text, const std::size_t* line,
          std::map<std::string, std::size_t>* lines)
      : text_(text), line_(line), lines_(lines) {}

  bool null() override { return Value(); }
  bool boolean(bool) override { return Value(); }
  bool number_integer(number_integer_t) override { return Value(); }
  bool number_unsigned(number_unsigned_t) override { return Value(); }
  bool number_float(number_float_t, const string_t&) override {
    return Value();
  }
  bool string(string_t&) override { return Value(); }
  bool binary(binary_t&) override { return Value(); }
  bool start_object(std::size_t) override { return Open(false); }
  bool key(string_t& key) override {
    stack_.back().key = key;
    lines_->emplace(stack_.back().pointer + "/" + Escape(key), *line_);
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return Open(true); }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    const std::size_t end = std::min(position, text_.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(
                                     text_.begin(), text_.begin() + end, '\n'));
    std::string what = ex.what();
    // nlohmann embeds its own "[json.exception...]" prefix; keep the tail.
    if (auto pos = what.find("] "); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    error_line = line;
    error_message = what;
    return false;
  }

  std::size_t error_line = 0;
  std::string error_message;

 private:
  struct Frame {
    bool array = false;
    std::size_t next_index = 0;
    std::string key;
    std::string pointer;
  };

  std::string NextPointer() {
    if (stack_.empty()) return "";
    auto& f = stack_.back();
    if (f.array) return f.pointer + "/" + std::to_string(f.next_index++);
    return f.pointer + "/" + Escape(f.key);
  }
  bool Value() {
    lines_->emplace(NextPointer(), *line_);
    return true;
  }
  bool Open(bool array) {
    std::string ptr = NextPointer();
    lines_->emplace(ptr, *line_);
    stack_.push_back(Frame{array, 0, "", std::move(ptr)});
    return true;
  }

  std::string_view text_;
  const std::size_t* line_;
  std::map<std::string, std::size_t>* lines_;
  std::vector<Frame> stack_;
};

}  // namespace

JsonLocator::JsonLocator(std::string_view text, std::string_view source) {
  std::size_t line = 1;
  LineSax sax(text, &line, &lines_);
  CountingIterator first(text.data(), &line);
  CountingIterator last(text.data() + text.size(), &line);
  const bool ok = json::sax_parse(first, last, &sax);
  if (!ok) {
    throw Error(ErrorCode::kParseError,
                sax.error_line == 0 ? 1 : sax.error_line,
                std::string(source) + ": " + sax.error_message);
  }
}

std::size_t JsonLocator::LineOf(std::string pointer) const {
  while (true) {
    auto it = lines_.find(pointer);
    if (it != lines_.end()) return it->second;
    auto slash = pointer.rfind('/');
    if (slash == std::string::npos) return 1;
    pointer.resize(slash);
  }
}

}  // namespace item::internal
