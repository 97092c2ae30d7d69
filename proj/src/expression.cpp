#include "stripns/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string_view>

namespace stripns {

namespace {

struct Function {
	std::string_view name;
	int arity;
};

constexpr std::array<Function, 15> functions{{{"sin", 1},
                                               {"cos", 1},
                                               {"tan", 1},
                                               {"sinh", 1},
                                               {"cosh", 1},
                                               {"tanh", 1},
                                               {"atan", 1},
                                               {"exp", 1},
                                               {"log", 1},
                                               {"sqrt", 1},
                                               {"abs", 1},
                                               {"pow", 2},
                                               {"min", 2},
                                               {"max", 2},
                                               {"atan2", 2}}};

double apply1(int id, double a) {
	switch (id) {
	case 0: return std::sin(a);
	case 1: return std::cos(a);
	case 2: return std::tan(a);
	case 3: return std::sinh(a);
	case 4: return std::cosh(a);
	case 5: return std::tanh(a);
	case 6: return std::atan(a);
	case 7: return std::exp(a);
	case 8: return std::log(a);
	case 9: return std::sqrt(a);
	default: return std::abs(a);
	}
}

double apply2(int id, double a, double b) {
	switch (id) {
	case 11: return std::pow(a, b);
	case 12: return std::min(a, b);
	case 13: return std::max(a, b);
	default: return std::atan2(a, b);
	}
}

} // namespace

class ExpressionParser {
public:
	ExpressionParser(Expression &e, std::string_view s) : e_(e), s_(s) {}

	int parse() {
		const int root = sum();
		skip();
		if (pos_ != s_.size())
			fail("unexpected '" + std::string(1, s_[pos_]) + "'");
		return root;
	}

private:
	using Op = Expression::Op;

	[[noreturn]] void fail(const std::string &msg) const {
		throw ExpressionError("expression \"" + std::string(s_) + "\": " + msg + " at position " + std::to_string(pos_),
		                      pos_);
	}

	void skip() {
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
			++pos_;
	}

	bool accept(char c) {
		skip();
		if (pos_ < s_.size() && s_[pos_] == c) {
			++pos_;
			return true;
		}
		return false;
	}

	int add(Expression::Node n) {
		e_.nodes_.push_back(n);
		return int(e_.nodes_.size()) - 1;
	}

	int binary(Op op, int l, int r) { return add({op, 0.0, 0, l, r}); }

	int sum() {
		int l = product();
		for (;;) {
			if (accept('+'))
				l = binary(Op::add, l, product());
			else if (accept('-'))
				l = binary(Op::sub, l, product());
			else
				return l;
		}
	}

	int product() {
		int l = unary();
		for (;;) {
			if (accept('*'))
				l = binary(Op::mul, l, unary());
			else if (accept('/'))
				l = binary(Op::div, l, unary());
			else
				return l;
		}
	}

	int unary() {
		if (accept('-'))
			return add({Op::neg, 0.0, 0, unary(), -1});
		if (accept('+'))
			return unary();
		return power();
	}

	int power() {
		const int base = primary();
		if (accept('^'))
			return binary(Op::pow, base, unary());
		return base;
	}

	int primary() {
		skip();
		if (pos_ >= s_.size())
			fail("unexpected end of input");
		const char c = s_[pos_];
		if (accept('(')) {
			const int inner = sum();
			if (!accept(')'))
				fail("expected ')'");
			return inner;
		}
		if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
			return number();
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
			return identifier();
		fail("unexpected '" + std::string(1, c) + "'");
	}

	int number() {
		const std::size_t start = pos_;
		while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
			++pos_;
		if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
			std::size_t p = pos_ + 1;
			if (p < s_.size() && (s_[p] == '+' || s_[p] == '-'))
				++p;
			if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
				pos_ = p;
				while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
					++pos_;
			}
		}
		double v = 0.0;
		const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
		if (ec != std::errc() || end != s_.data() + pos_) {
			pos_ = start;
			fail("malformed number");
		}
		return add({Op::number, v, 0, -1, -1});
	}

	int identifier() {
		const std::size_t start = pos_;
		while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
			++pos_;
		const std::string_view name = s_.substr(start, pos_ - start);
		skip();
		if (pos_ < s_.size() && s_[pos_] == '(') {
			const auto f = std::find_if(functions.begin(), functions.end(),
			                            [&](const Function &fn) { return fn.name == name; });
			if (f == functions.end()) {
				pos_ = start;
				fail("unknown function '" + std::string(name) + "'");
			}
			const int id = int(f - functions.begin());
			accept('(');
			const int a = sum();
			int b = -1;
			if (f->arity == 2) {
				if (!accept(','))
					fail("function '" + std::string(name) + "' takes two arguments");
				b = sum();
			}
			if (!accept(')'))
				fail("expected ')' after the arguments of '" + std::string(name) + "'");
			return add({f->arity == 1 ? Op::call1 : Op::call2, 0.0, id, a, b});
		}
		const auto &vars = e_.variables_;
		const auto v = std::find(vars.begin(), vars.end(), name);
		if (v != vars.end()) {
			const int slot = int(v - vars.begin());
			e_.used_[std::size_t(slot)] = true;
			return add({Op::variable, 0.0, slot, -1, -1});
		}
		if (name == "pi")
			return add({Op::number, std::numbers::pi, 0, -1, -1});
		if (name == "e")
			return add({Op::number, std::numbers::e, 0, -1, -1});
		pos_ = start;
		fail("unknown name '" + std::string(name) + "'");
	}

	Expression &e_;
	std::string_view s_;
	std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string &text, std::vector<std::string> variables) {
	Expression e;
	e.text_ = text;
	e.variables_ = std::move(variables);
	e.used_.assign(e.variables_.size(), false);
	ExpressionParser p(e, e.text_);
	e.root_ = p.parse();
	return e;
}

bool Expression::uses(const std::string &variable) const {
	const auto v = std::find(variables_.begin(), variables_.end(), variable);
	return v != variables_.end() && used_[std::size_t(v - variables_.begin())];
}

double Expression::operator()(const std::vector<double> &values) const {
	if (root_ < 0)
		throw Error("Expression: evaluating an empty expression");
	if (values.size() != variables_.size())
		throw Error("Expression: expected " + std::to_string(variables_.size()) + " variable values, got " +
		            std::to_string(values.size()));
	return eval(root_, values);
}

double Expression::eval(int node, const std::vector<double> &values) const {
	const Node &n = nodes_[std::size_t(node)];
	switch (n.op) {
	case Op::number: return n.value;
	case Op::variable: return values[std::size_t(n.index)];
	case Op::neg: return -eval(n.lhs, values);
	case Op::add: return eval(n.lhs, values) + eval(n.rhs, values);
	case Op::sub: return eval(n.lhs, values) - eval(n.rhs, values);
	case Op::mul: return eval(n.lhs, values) * eval(n.rhs, values);
	case Op::div: return eval(n.lhs, values) / eval(n.rhs, values);
	case Op::pow: return std::pow(eval(n.lhs, values), eval(n.rhs, values));
	case Op::call1: return apply1(n.index, eval(n.lhs, values));
	case Op::call2: return apply2(n.index, eval(n.lhs, values), eval(n.rhs, values));
	}
	return 0.0;
}

} // namespace stripns
