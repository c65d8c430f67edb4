#include "dopfac/registry.hpp"

#include <map>
#include <mutex>

#include "dopfac/error.hpp"

namespace dopfac {
namespace {

struct Registry {
  std::mutex mu;
  std::vector<std::string> names;
  std::map<std::string, std::size_t, std::less<>> index;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::size_t var(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (auto it = r.index.find(name); it != r.index.end()) return it->second;
  std::size_t i = r.names.size();
  r.names.emplace_back(name);
  r.index.emplace(std::string(name), i);
  return i;
}

std::optional<std::size_t> find_var(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (auto it = r.index.find(name); it != r.index.end()) return it->second;
  return std::nullopt;
}

std::string var_name(std::size_t index) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (index >= r.names.size())
    throw Error("unknown variable index " + std::to_string(index));
  return r.names[index];
}

std::size_t var_count() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  return r.names.size();
}

std::vector<std::string> var_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  return r.names;
}

}  // namespace dopfac
