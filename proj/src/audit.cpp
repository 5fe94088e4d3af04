#include "glin/audit.hpp"

#include <algorithm>
#include <ostream>

namespace glin {

bool AuditReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.passed; });
}

AuditItem& AuditReport::add(std::string name, bool ok, double worst_residual, std::string detail) {
  items.push_back({std::move(name), ok, worst_residual, std::move(detail)});
  return items.back();
}

const AuditItem* AuditReport::find(const std::string& name) const {
  for (const auto& i : items) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

void write_report(std::ostream& os, const AuditReport& report) {
  os << "report: " << report.title << "\n";
  for (const auto& i : report.items) {
    os << "check: " << i.name << "\n";
    os << "  status: " << (i.passed ? "PASS" : "FAIL") << "\n";
    os << "  worst_residual: " << i.worst_residual << "\n";
    if (!i.detail.empty()) os << "  detail: " << i.detail << "\n";
  }
  os << "verdict: " << (report.passed() ? "PASS" : "FAIL") << "\n";
}

}  // namespace glin
