#include "dynconn/trace.hpp"

#include <fstream>
#include <sstream>

namespace dynconn {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& msg) {
  throw DomainError("trace parse error at line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::vector<TraceOp> parse_trace(std::istream& in) {
  std::vector<TraceOp> ops;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    TraceOp op;
    auto read_vertex = [&](VertexId& out) {
      long long x;
      if (!(ls >> x) || x < 0) parse_error(line_no, "expected vertex id");
      out = static_cast<VertexId>(x);
    };
    if (tok == "I") {
      op.kind = TraceOp::kInsert;
      read_vertex(op.u);
      read_vertex(op.v);
    } else if (tok == "D") {
      op.kind = TraceOp::kDelete;
      read_vertex(op.u);
      read_vertex(op.v);
    } else if (tok == "DX") {
      op.kind = TraceOp::kDeleteById;
      long long e;
      if (!(ls >> e) || e < 0) parse_error(line_no, "expected edge id");
      op.edge = static_cast<EdgeId>(e);
    } else if (tok == "S") {
      op.kind = TraceOp::kSplit;
      read_vertex(op.u);
      std::string rest;
      if (ls >> rest) {
        std::istringstream es(rest);
        std::string item;
        while (std::getline(es, item, ',')) {
          if (item.empty()) continue;
          try {
            op.side_a.push_back(static_cast<EdgeId>(std::stoul(item)));
          } catch (...) {
            parse_error(line_no, "bad edge id '" + item + "'");
          }
        }
      }
    } else if (tok == "Q") {
      op.kind = TraceOp::kQuery;
      read_vertex(op.u);
      read_vertex(op.v);
    } else if (tok == "QC") {
      op.kind = TraceOp::kQueryCount;
    } else {
      parse_error(line_no, "unknown op '" + tok + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<TraceOp> parse_trace_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open trace file: " + path);
  return parse_trace(f);
}

std::string format_trace_op(const TraceOp& op) {
  std::ostringstream os;
  switch (op.kind) {
    case TraceOp::kInsert:
      os << "I " << op.u << ' ' << op.v;
      break;
    case TraceOp::kDelete:
      os << "D " << op.u << ' ' << op.v;
      break;
    case TraceOp::kDeleteById:
      os << "DX " << op.edge;
      break;
    case TraceOp::kSplit: {
      os << "S " << op.u << ' ';
      for (std::size_t i = 0; i < op.side_a.size(); ++i) {
        if (i) os << ',';
        os << op.side_a[i];
      }
      break;
    }
    case TraceOp::kQuery:
      os << "Q " << op.u << ' ' << op.v;
      break;
    case TraceOp::kQueryCount:
      os << "QC";
      break;
  }
  return os.str();
}

void write_trace(std::ostream& out, const std::vector<TraceOp>& ops) {
  for (const TraceOp& op : ops) out << format_trace_op(op) << '\n';
}

}  // namespace dynconn
