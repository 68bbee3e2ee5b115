#pragma once

// Scene description: one statement per line, blocks in braces, '#' comments.
//
//   background <r> <g> <b>
//   camera { position <x y z>  look_at <x y z>  up <x y z>  fov <deg>  resolution <w> <h> }
//   medium <name> {
//     model <spec>                      scattered-class model (model-spec grammar)
//     model_rgb <spec> <spec> <spec>
//     source <spec> | source_rgb ...    camera, boundary and surface flights (default: model)
//     light <light-name> <spec>         connections toward that light (default: source)
//     albedo <a> | albedo <r> <g> <b>
//     phase isotropic | phase hg <g>
//     ellipsoid <xx> <yy> <zz> [<xy> <xz> <yz>]
//   }
//   sphere { center <x y z>  radius <r>  medium <name>  material ... }
//   box    { min <x y z>  max <x y z>  medium <name>  material ... }
//   plane  { point <x y z>  normal <x y z>  material ... }
//   material none | lambert <r> <g> <b> | dielectric <ior>
//   light point <name> { position <x y z>  intensity <r> <g> <b> }
//   light area <name>  { corner <x y z>  u <x y z>  v <x y z>  radiance <r> <g> <b> }
//   interface <medium> <medium> { c12 <value> }      only c12 = 0 is accepted
//
// Every statement inside a block sits on its own line.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "corrtrans/render/scene.hpp"

namespace corrtrans::render {

class SceneParseError : public std::runtime_error {
public:
  SceneParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses and validates a scene; errors carry 1-based line and column.
Scene parse_scene(std::string_view text);

}  // namespace corrtrans::render
