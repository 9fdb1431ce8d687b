#pragma once

#include "hnnlab/config.hpp"

#include <string>

namespace fixtures {

inline std::string presentation_path(const std::string& name) {
  return std::string(HNNLAB_PRESENTATION_DIR) + "/" + name + ".json";
}

inline hnnlab::Group load(const std::string& name) { return hnnlab::Group(hnnlab::load_config(presentation_path(name))); }

inline hnnlab::Word word(const hnnlab::Group& g, const std::string& text) {
  return hnnlab::parse_word(g.alphabet(), text);
}

inline hnnlab::SyllableWord syl(const hnnlab::Group& g, const std::string& text) {
  return hnnlab::to_syllables(g, word(g, text));
}

inline hnnlab::SyllableWord base(long long x) { return {hnnlab::BaseSyllable{hnnlab::Vertex::H, {x}}}; }

}  // namespace fixtures
