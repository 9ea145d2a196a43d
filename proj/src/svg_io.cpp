/* Copyright 2026 the fpvec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "svg_io.hpp"

#include <charconv>
#include <cmath>
#include <optional>

#include <json.hpp>

namespace fpv {

std::string format_number(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// ---------------------------------------------------------------------------
// Minimal XML subset parser: elements, attributes, comments, prolog,
// doctype. Text content is skipped. Enough for the annotation schema while
// staying panic-free on arbitrary bytes.

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlElement> children;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

class XmlParser {
 public:
  explicit XmlParser(std::string_view text) : text_(text) {}

  XmlElement parse_document() {
    skip_misc();
    if (eof()) fail("no root element");
    XmlElement root = parse_element(0);
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    raise(Errc::MalformedXml, "malformed XML at byte " + std::to_string(pos_) + ": " + what);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) ++pos_;
  }

  void skip_until(std::string_view end, const char* what) {
    size_t idx = text_.find(end, pos_);
    if (idx == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = idx + end.size();
  }

  // Whitespace, comments, processing instructions, doctype.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
      } else if (starts_with("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!")) {
        pos_ += 2;
        skip_until(">", "declaration");
      } else {
        return;
      }
    }
  }

  static bool name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
  }
  static bool name_char(char c) {
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !name_start(peek())) fail("expected a name");
    size_t start = pos_;
    while (!eof() && name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out.push_back('&');
      else if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "quot") out.push_back('"');
      else if (ent == "apos") out.push_back('\'');
      else if (!ent.empty() && ent[0] == '#') {
        int code = 0;
        std::string_view digits = ent.substr(1);
        bool hex = !digits.empty() && (digits[0] == 'x' || digits[0] == 'X');
        if (hex) digits.remove_prefix(1);
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(), code,
                                   hex ? 16 : 10);
        if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || code < 0 ||
            code > 0x10FFFF) {
          fail("bad character reference");
        }
        if (code < 0x80) {
          out.push_back(static_cast<char>(code));
        } else {
          // UTF-8 encode; annotation content never needs this but arbitrary
          // inputs may.
          if (code < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
          } else if (code < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          } else {
            out.push_back(static_cast<char>(0xF0 | (code >> 18)));
            out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          }
          if (code >= 0x800) out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
      } else {
        fail("unknown entity &" + std::string(ent) + ";");
      }
      i = semi;
    }
    return out;
  }

  XmlElement parse_element(int depth) {
    if (depth > 64) fail("element nesting too deep");
    if (eof() || peek() != '<') fail("expected '<'");
    ++pos_;
    XmlElement el;
    el.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        return el;
      }
      std::string key = parse_name();
      skip_ws();
      if (eof() || peek() != '=') fail("expected '=' after attribute name");
      ++pos_;
      skip_ws();
      if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
      char quote = peek();
      ++pos_;
      size_t start = pos_;
      while (!eof() && peek() != quote) ++pos_;
      if (eof()) fail("unterminated attribute value");
      el.attrs.emplace_back(std::move(key), decode_entities(text_.substr(start, pos_ - start)));
      ++pos_;
    }
    // Content: children and ignorable text until the matching end tag.
    for (;;) {
      size_t lt = text_.find('<', pos_);
      if (lt == std::string_view::npos) fail("missing </" + el.name + ">");
      pos_ = lt;
      if (starts_with("</")) {
        pos_ += 2;
        std::string name = parse_name();
        if (name != el.name) fail("mismatched end tag </" + name + ">");
        skip_ws();
        if (eof() || peek() != '>') fail("malformed end tag");
        ++pos_;
        return el;
      }
      if (starts_with("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        pos_ += 9;
        skip_until("]]>", "CDATA section");
      } else if (starts_with("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!")) {
        pos_ += 2;
        skip_until(">", "declaration");
      } else {
        el.children.push_back(parse_element(depth + 1));
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// "x1,y1 x2,y2 ..." with commas or whitespace as separators.
std::vector<Point> parse_point_list(std::string_view s, int element_index) {
  std::vector<double> nums;
  size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == ',' || c == '\t' || c == '\r' || c == '\n'; };
  while (i < s.size()) {
    if (is_sep(s[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < s.size() && !is_sep(s[j])) ++j;
    auto v = parse_double(s.substr(i, j - i));
    if (!v) {
      raise(Errc::BadPointList,
            "element " + std::to_string(element_index) + ": unparseable points entry '" +
                std::string(s.substr(i, j - i)) + "'");
    }
    nums.push_back(*v);
    i = j;
  }
  if (nums.empty() || nums.size() % 2 != 0) {
    raise(Errc::BadPointList,
          "element " + std::to_string(element_index) + ": odd or empty coordinate list");
  }
  std::vector<Point> pts(nums.size() / 2);
  for (size_t k = 0; k < pts.size(); ++k) pts[k] = {nums[2 * k], nums[2 * k + 1]};
  return pts;
}

std::string point_list(std::span<const Point> pts) {
  std::string out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out.push_back(' ');
    out += format_number(pts[i].x);
    out.push_back(',');
    out += format_number(pts[i].y);
  }
  return out;
}

void require_valid(const FloorplanModel& model) {
  ValidationReport rep = validate_model(model);
  if (!rep.ok()) {
    std::string what = "model fails validation:";
    for (const Violation& v : rep.violations) {
      what += " [" + v.element + "] " + v.code + ";";
    }
    throw InvalidModelError(std::move(rep), what);
  }
}

}  // namespace

ParsedAnnotation parse_annotation(std::string_view svg_text) {
  XmlElement root = XmlParser(svg_text).parse_document();
  if (root.name != "svg") raise(Errc::MalformedXml, "root element is <" + root.name + ">, not <svg>");

  ParsedAnnotation out;
  const std::string* w = root.attr("width");
  const std::string* h = root.attr("height");
  std::optional<double> wv = w ? parse_double(*w) : std::nullopt;
  std::optional<double> hv = h ? parse_double(*h) : std::nullopt;
  if (!wv || !hv || *wv <= 0 || *hv <= 0) {
    raise(Errc::MissingViewport, "svg element lacks a positive width/height viewport");
  }
  out.model.width = static_cast<int>(std::lround(*wv));
  out.model.height = static_cast<int>(std::lround(*hv));

  for (size_t idx = 0; idx < root.children.size(); ++idx) {
    const XmlElement& el = root.children[idx];
    int eidx = static_cast<int>(idx);
    auto warn = [&](const std::string& why) {
      out.warnings.push_back("element " + std::to_string(eidx) + ": " + why);
    };
    if (el.name != "polygon") {
      warn("<" + el.name + "> not part of the annotation schema");
      continue;
    }
    const std::string* cls = el.attr("class");
    if (!cls) {
      warn("polygon without class attribute");
      continue;
    }
    std::string_view c = *cls;
    size_t space = c.find(' ');
    std::string_view head = c.substr(0, space);
    std::string_view tail = space == std::string_view::npos ? std::string_view{} : c.substr(space + 1);

    if (head == "Wall") {
      const std::string* cl = el.attr("data-centerline");
      const std::string* dw = el.attr("data-width");
      std::optional<double> width = dw ? parse_double(*dw) : std::nullopt;
      if (!cl || !width) {
        warn("Wall polygon missing data-centerline/data-width");
        continue;
      }
      std::vector<Point> pts = parse_point_list(*cl, eidx);
      if (pts.size() != 2) {
        raise(Errc::BadPointList, "element " + std::to_string(eidx) +
                                      ": wall centerline needs exactly 2 points");
      }
      out.model.walls.push_back({pts[0], pts[1], *width});
    } else if (head == "Space") {
      const std::string* pl = el.attr("points");
      if (!pl) {
        raise(Errc::BadPointList, "element " + std::to_string(eidx) + ": missing points attribute");
      }
      Room room;
      // Unknown room types degrade to OtherRooms so real-world variants
      // parse.
      if (!room_class_from_name(tail, &room.label)) room.label = RoomClass::OtherRooms;
      room.polygon = parse_point_list(*pl, eidx);
      out.model.rooms.push_back(std::move(room));
    } else if (head == "FixedFurniture") {
      IconClass label;
      if (!icon_class_from_name(tail, &label) || label == IconClass::Empty ||
          label == IconClass::Window || label == IconClass::Door) {
        warn("unknown icon class '" + std::string(tail) + "'");
        continue;
      }
      const std::string* pl = el.attr("points");
      if (!pl) {
        raise(Errc::BadPointList, "element " + std::to_string(eidx) + ": missing points attribute");
      }
      std::vector<Point> pts = parse_point_list(*pl, eidx);
      Rect box = polygon_bbox(pts);
      out.model.icons.push_back({box, label});
    } else if (head == "Window" || head == "Door") {
      const std::string* dw = el.attr("data-width");
      const std::string* pl = el.attr("points");
      std::optional<double> width = dw ? parse_double(*dw) : std::nullopt;
      if (!width) {
        warn("opening polygon missing data-width");
        continue;
      }
      if (!pl) {
        raise(Errc::BadPointList, "element " + std::to_string(eidx) + ": missing points attribute");
      }
      std::vector<Point> pts = parse_point_list(*pl, eidx);
      Rect box = polygon_bbox(pts);
      Opening op;
      op.width = *width;
      op.label = head == "Window" ? IconClass::Window : IconClass::Door;
      // The rect is the segment dilated by width/2 across it; whichever
      // extent matches the width is the cross direction (tie: horizontal).
      if (std::abs(box.height() - *width) <= std::abs(box.width() - *width)) {
        double yc = (box.min.y + box.max.y) / 2.0;
        op.a = {box.min.x, yc};
        op.b = {box.max.x, yc};
      } else {
        double xc = (box.min.x + box.max.x) / 2.0;
        op.a = {xc, box.min.y};
        op.b = {xc, box.max.y};
      }
      out.model.openings.push_back(op);
    } else {
      warn("unrecognized polygon class '" + std::string(c) + "'");
    }
  }
  return out;
}

std::string write_annotation(const FloorplanModel& model) {
  require_valid(model);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(model.width) + "\" height=\"" + std::to_string(model.height) +
                    "\">\n";
  for (const Wall& w : model.walls) {
    auto poly = w.polygon();
    std::vector<Point> centerline = {w.a, w.b};
    out += "  <polygon class=\"Wall\" data-width=\"" + format_number(w.width) +
           "\" data-centerline=\"" + point_list(centerline) + "\" points=\"" +
           point_list(std::span<const Point>(poly.data(), poly.size())) + "\"/>\n";
  }
  for (const Room& r : model.rooms) {
    out += "  <polygon class=\"Space " + std::string(room_class_name(r.label)) + "\" points=\"" +
           point_list(r.polygon) + "\"/>\n";
  }
  for (const Icon& ic : model.icons) {
    Point nw = ic.bbox.min, se = ic.bbox.max;
    std::vector<Point> pts = {nw, {se.x, nw.y}, se, {nw.x, se.y}};
    out += "  <polygon class=\"FixedFurniture " + std::string(icon_class_name(ic.label)) +
           "\" points=\"" + point_list(pts) + "\"/>\n";
  }
  for (const Opening& op : model.openings) {
    Rect r = op.rect();
    std::vector<Point> pts = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
    out += "  <polygon class=\"" + std::string(icon_class_name(op.label)) + "\" data-width=\"" +
           format_number(op.width) + "\" points=\"" + point_list(pts) + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json point_json(const Point& p) { return ordered_json::array({p.x, p.y}); }

Point point_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    raise(Errc::BadFormat, "expected [x,y] point");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string serialize_model_json(const FloorplanModel& model) {
  require_valid(model);
  ordered_json j;
  j["schema"] = "fpv-1";
  j["image_size"] = ordered_json::array({model.width, model.height});
  j["walls"] = ordered_json::array();
  for (const Wall& w : model.walls) {
    ordered_json e;
    e["centerline"] = ordered_json::array({point_json(w.a), point_json(w.b)});
    e["width"] = w.width;
    j["walls"].push_back(std::move(e));
  }
  j["rooms"] = ordered_json::array();
  for (const Room& r : model.rooms) {
    ordered_json e;
    e["label"] = std::string(room_class_name(r.label));
    ordered_json poly = ordered_json::array();
    for (const Point& p : r.polygon) poly.push_back(point_json(p));
    e["polygon"] = std::move(poly);
    j["rooms"].push_back(std::move(e));
  }
  j["icons"] = ordered_json::array();
  for (const Icon& ic : model.icons) {
    ordered_json e;
    e["label"] = std::string(icon_class_name(ic.label));
    e["bbox"] = ordered_json::array({point_json(ic.bbox.min), point_json(ic.bbox.max)});
    j["icons"].push_back(std::move(e));
  }
  j["openings"] = ordered_json::array();
  for (const Opening& op : model.openings) {
    ordered_json e;
    e["label"] = std::string(icon_class_name(op.label));
    e["segment"] = ordered_json::array({point_json(op.a), point_json(op.b)});
    e["width"] = op.width;
    j["openings"].push_back(std::move(e));
  }
  return j.dump();
}

FloorplanModel parse_model_json(std::string_view text) try {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(Errc::BadFormat, "invalid JSON");
  if (!j.is_object() || j.value("schema", "") != "fpv-1") {
    raise(Errc::BadFormat, "not an fpv-1 document");
  }
  FloorplanModel m;
  const auto& size = j.at("image_size");
  if (!size.is_array() || size.size() != 2) raise(Errc::BadFormat, "bad image_size");
  m.width = size[0].get<int>();
  m.height = size[1].get<int>();
  for (const auto& e : j.value("walls", ordered_json::array())) {
    const auto& cl = e.at("centerline");
    if (!cl.is_array() || cl.size() != 2) raise(Errc::BadFormat, "bad wall centerline");
    m.walls.push_back({point_from_json(cl[0]), point_from_json(cl[1]), e.at("width").get<double>()});
  }
  for (const auto& e : j.value("rooms", ordered_json::array())) {
    Room r;
    if (!room_class_from_name(e.at("label").get<std::string>(), &r.label)) {
      raise(Errc::BadFormat, "unknown room label");
    }
    for (const auto& p : e.at("polygon")) r.polygon.push_back(point_from_json(p));
    m.rooms.push_back(std::move(r));
  }
  for (const auto& e : j.value("icons", ordered_json::array())) {
    Icon ic;
    if (!icon_class_from_name(e.at("label").get<std::string>(), &ic.label)) {
      raise(Errc::BadFormat, "unknown icon label");
    }
    const auto& bb = e.at("bbox");
    if (!bb.is_array() || bb.size() != 2) raise(Errc::BadFormat, "bad icon bbox");
    ic.bbox = {point_from_json(bb[0]), point_from_json(bb[1])};
    m.icons.push_back(ic);
  }
  for (const auto& e : j.value("openings", ordered_json::array())) {
    Opening op;
    if (!icon_class_from_name(e.at("label").get<std::string>(), &op.label)) {
      raise(Errc::BadFormat, "unknown opening label");
    }
    const auto& seg = e.at("segment");
    if (!seg.is_array() || seg.size() != 2) raise(Errc::BadFormat, "bad opening segment");
    op.a = point_from_json(seg[0]);
    op.b = point_from_json(seg[1]);
    op.width = e.at("width").get<double>();
    m.openings.push_back(op);
  }
  return m;
} catch (const nlohmann::json::exception& e) {
  raise(Errc::BadFormat, std::string("bad fpv-1 document: ") + e.what());
}

}  // namespace fpv
