#include "hyperwalk/backend.hpp"

#include <charconv>
#include <stdexcept>

namespace hyperwalk {

namespace {

int parse_int(std::string_view text, std::string_view spec) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad integer '" + std::string(text) + "' in backend spec '" +
                                std::string(spec) + "'");
  }
  return value;
}

}  // namespace

AnyBackend make_backend(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("backend spec must be free:k or fuchsian:P,Q, got '" +
                                std::string(spec) + "'");
  }
  const auto kind = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  if (kind == "free") return FreeGroup(parse_int(args, spec));
  if (kind == "fuchsian") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("fuchsian backend needs P,Q: '" + std::string(spec) + "'");
    }
    return FuchsianGroup(parse_int(args.substr(0, comma), spec),
                         parse_int(args.substr(comma + 1), spec));
  }
  throw std::invalid_argument("unknown backend kind '" + std::string(kind) + "'");
}

std::string backend_spec(const AnyBackend& backend) {
  return std::visit([](const auto& b) { return b.spec(); }, backend);
}

}  // namespace hyperwalk
