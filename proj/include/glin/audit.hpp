#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glin {

struct AuditItem {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  std::string detail;
};

/// Pass/fail record for a family of numerical checks, printed as key: value blocks.
struct AuditReport {
  std::string title;
  std::vector<AuditItem> items;

  bool passed() const;
  AuditItem& add(std::string name, bool passed, double worst_residual, std::string detail = {});
  const AuditItem* find(const std::string& name) const;
};

void write_report(std::ostream& os, const AuditReport& report);

}  // namespace glin
