#include <sstream>

#include "tierslice/frontend.hpp"

namespace tierslice {

namespace {

std::string annotationComment(const std::vector<Annotation>& annotations) {
  std::string out = "/*";
  for (const auto& a : annotations) {
    out += " @";
    out += annotationName(a.kind);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      out += i == 0 ? " " : ", ";
      out += a.args[i].name;
      if (a.args[i].isPair()) out += " : " + a.args[i].value;
    }
  }
  out += " */";
  return out;
}

class Printer {
 public:
  std::string program(const SourceProgram& p) {
    bool first = true;
    for (const auto& item : p.layout) {
      if (!first) out_ << '\n';
      first = false;
      if (item.isSlice) {
        const SliceDecl& slice = p.slices[item.index];
        out_ << annotationComment(slice.annotations) << '\n';
        block(slice.body, 0);
        out_ << '\n';
      } else {
        stmt(p.shared[item.index], 0);
      }
    }
    return out_.str();
  }

 private:
  void indent(int level) {
    for (int i = 0; i < level; ++i) out_ << "  ";
  }

  // Writes "{", the statements, and a closing "}" at `level` without a
  // trailing newline.
  void block(const std::vector<Stmt>& body, int level) {
    out_ << "{\n";
    for (const auto& s : body) stmt(s, level + 1);
    indent(level);
    out_ << '}';
  }

  // Body of if/while/for/else, starting right after the header.
  void subStatement(const Stmt& s, int level) {
    if (s.kind == StmtKind::Block && s.annotations.empty()) {
      out_ << ' ';
      block(s.body, level);
      out_ << '\n';
    } else {
      out_ << '\n';
      stmt(s, level + 1);
    }
  }

  void stmt(const Stmt& s, int level) {
    indent(level);
    if (!s.annotations.empty()) {
      out_ << annotationComment(s.annotations) << '\n';
      indent(level);
    }
    switch (s.kind) {
      case StmtKind::VarDecl:
        out_ << varDecl(s, level) << ";\n";
        break;
      case StmtKind::FunctionDecl:
        out_ << "function " << s.name << '(' << joined(s.params) << ") ";
        block(s.body, level);
        out_ << '\n';
        break;
      case StmtKind::Expression:
        out_ << expr(s.exprs.front(), level) << ";\n";
        break;
      case StmtKind::If:
        out_ << "if (" << expr(s.exprs.front(), level) << ')';
        subStatement(s.body.front(), level);
        if (!s.alt.empty()) {
          indent(level);
          out_ << "else";
          subStatement(s.alt.front(), level);
        }
        break;
      case StmtKind::While:
        out_ << "while (" << expr(s.exprs.front(), level) << ')';
        subStatement(s.body.front(), level);
        break;
      case StmtKind::For: {
        out_ << "for (";
        if (!s.alt.empty()) {
          const Stmt& init = s.alt.front();
          out_ << (init.kind == StmtKind::VarDecl ? varDecl(init, level)
                                                   : expr(init.exprs.front(), level));
        }
        out_ << "; " << expr(s.exprs[0], level) << "; " << expr(s.exprs[1], level) << ')';
        subStatement(s.body.front(), level);
        break;
      }
      case StmtKind::Return:
        out_ << "return";
        if (!s.exprs.empty()) out_ << ' ' << expr(s.exprs.front(), level);
        out_ << ";\n";
        break;
      case StmtKind::Block:
        block(s.body, level);
        out_ << '\n';
        break;
      case StmtKind::Ui:
        out_ << '{' << s.raw << "}\n";
        break;
      case StmtKind::Empty:
        out_ << ";\n";
        break;
    }
  }

  std::string varDecl(const Stmt& s, int level) {
    std::string out = s.name + " ";
    for (std::size_t i = 0; i < s.bindings.size(); ++i) {
      if (i > 0) out += ", ";
      out += s.bindings[i].name;
      if (!s.bindings[i].init.empty()) out += " = " + expr(s.bindings[i].init.front(), level);
    }
    return out;
  }

  static std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ", ";
      out += items[i];
    }
    return out;
  }

  std::string args(const Expr& call, int level) {
    std::string out = "(";
    for (std::size_t i = 1; i < call.operands.size(); ++i) {
      if (i > 1) out += ", ";
      out += expr(call.operands[i], level);
    }
    return out + ")";
  }

  std::string expr(const Expr& e, int level) {
    switch (e.kind) {
      case ExprKind::Empty:
        return {};
      case ExprKind::Identifier:
      case ExprKind::Number:
      case ExprKind::String:
      case ExprKind::Literal:
        return e.text;
      case ExprKind::Array: {
        std::string out = "[";
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          if (i > 0) out += ", ";
          out += expr(e.operands[i], level);
        }
        return out + "]";
      }
      case ExprKind::Object: {
        if (e.operands.empty()) return "{}";
        std::string out = "{";
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          out += i == 0 ? "" : ", ";
          out += e.keys[i] + ": " + expr(e.operands[i], level);
        }
        return out + "}";
      }
      case ExprKind::Function: {
        std::string out = "function ";
        if (!e.text.empty()) out += e.text;
        out += "(" + joined(e.keys) + ") ";
        Printer inner;
        inner.block(e.body, level);
        return out + inner.out_.str();
      }
      case ExprKind::Member:
        return expr(e.operands[0], level) + "." + e.text;
      case ExprKind::Index:
        return expr(e.operands[0], level) + "[" + expr(e.operands[1], level) + "]";
      case ExprKind::Call:
        return expr(e.operands[0], level) + args(e, level);
      case ExprKind::New:
        return "new " + expr(e.operands[0], level) + args(e, level);
      case ExprKind::Unary: {
        const std::string operand = expr(e.operands[0], level);
        const bool needsSpace = e.text == "typeof" ||
                                (!operand.empty() && (operand[0] == '-' || operand[0] == '+'));
        return e.text + (needsSpace ? " " : "") + operand;
      }
      case ExprKind::Postfix:
        return expr(e.operands[0], level) + e.text;
      case ExprKind::Binary:
      case ExprKind::Assign:
        return expr(e.operands[0], level) + " " + e.text + " " + expr(e.operands[1], level);
      case ExprKind::Conditional:
        return expr(e.operands[0], level) + " ? " + expr(e.operands[1], level) + " : " +
               expr(e.operands[2], level);
      case ExprKind::Paren:
        return "(" + expr(e.operands[0], level) + ")";
    }
    return {};
  }

  std::ostringstream out_;
};

}  // namespace

std::string emit(const SourceProgram& program) { return Printer().program(program); }

}  // namespace tierslice
