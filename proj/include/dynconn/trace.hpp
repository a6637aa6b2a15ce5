#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dynconn/types.hpp"

namespace dynconn {

// Text trace, one op per line:
//   I u v           insert edge
//   D u v           delete first alive edge (u,v)
//   DX e            delete by edge id
//   S v e1,e2,...   split v; listed edges go to side A
//   Q u v           connectivity query
//   QC              component-count query
// '#' starts a comment line.
struct TraceOp {
  enum Kind : std::uint8_t { kInsert, kDelete, kDeleteById, kSplit, kQuery, kQueryCount };
  Kind kind;
  VertexId u = kNoVertex, v = kNoVertex;
  EdgeId edge = kNoEdge;
  std::vector<EdgeId> side_a;
};

std::vector<TraceOp> parse_trace(std::istream& in);
std::vector<TraceOp> parse_trace_file(const std::string& path);
std::string format_trace_op(const TraceOp& op);
void write_trace(std::ostream& out, const std::vector<TraceOp>& ops);

}  // namespace dynconn
