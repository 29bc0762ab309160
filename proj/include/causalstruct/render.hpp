#pragma once

#include <string>

#include "causalstruct/layout.hpp"

namespace causalstruct {

enum class Viewpoint { Front, Side, Top, ThreeQuarter };

std::string_view to_string(Viewpoint view);
Viewpoint parse_viewpoint(std::string_view text);

/// A rendered proxy view: a standalone SVG document.
struct RenderedView {
  Viewpoint viewpoint = Viewpoint::ThreeQuarter;
  int width = 0;
  int height = 0;
  std::string document;
};

/// Orthographic projection of every box, painted far-to-near. Output bytes
/// depend only on (scene, viewpoint, size).
RenderedView render_view(const LayoutScene& scene, Viewpoint viewpoint, int width = 512,
                         int height = 512);

class Renderer {
 public:
  virtual ~Renderer() = default;
  virtual RenderedView render(const LayoutScene& scene, Viewpoint viewpoint) const = 0;
};

class ProxyRenderer final : public Renderer {
 public:
  ProxyRenderer(int width = 512, int height = 512) : width_(width), height_(height) {}
  RenderedView render(const LayoutScene& scene, Viewpoint viewpoint) const override {
    return render_view(scene, viewpoint, width_, height_);
  }

 private:
  int width_;
  int height_;
};

}  // namespace causalstruct
