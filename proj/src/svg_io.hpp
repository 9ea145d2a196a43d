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
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "model.hpp"

namespace fpv {

// Thrown by write_annotation / serialize when the model breaks an invariant.
class InvalidModelError : public Error {
 public:
  InvalidModelError(ValidationReport report, const std::string& what)
      : Error(Errc::InvalidModel, what), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct ParsedAnnotation {
  FloorplanModel model;
  // One entry per unrecognized SVG element, e.g. "element 3: <rect> not part
  // of the annotation schema".
  std::vector<std::string> warnings;
};

// Annotation SVG schema:
//   <svg xmlns="http://www.w3.org/2000/svg" width="W" height="H">
//     <polygon class="Wall" data-width="W" data-centerline="x1,y1 x2,y2" points="..."/>
//     <polygon class="Space <RoomClass>" points="..."/>
//     <polygon class="FixedFurniture <IconClass>" points="..."/>
//     <polygon class="Window|Door" data-width="W" points="..."/>   (dilated rect)
//   </svg>
// Unknown room class names degrade to OtherRooms; unknown icon class names
// become warnings. Never crashes on arbitrary bytes: malformed input throws
// Error (MalformedXml / MissingViewport / BadPointList).
ParsedAnnotation parse_annotation(std::string_view svg_text);

// Inverse of parse_annotation; emits elements in the stable order walls,
// rooms, icons, openings (input order within a group). Numbers use the
// shortest decimal form that round-trips.
std::string write_annotation(const FloorplanModel& model);

// Canonical JSON form, schema "fpv-1". Deterministic, byte-stable.
std::string serialize_model_json(const FloorplanModel& model);
FloorplanModel parse_model_json(std::string_view text);

// Shortest round-trippable decimal representation (shared by SVG and CSV
// emitters).
std::string format_number(double v);

}  // namespace fpv
