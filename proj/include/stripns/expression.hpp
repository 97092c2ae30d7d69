#pragma once

#include <string>
#include <vector>

#include "stripns/grid.hpp"

namespace stripns {

class ExpressionError : public Error {
public:
	ExpressionError(const std::string &what, std::size_t position) : Error(what), position(position) {}
	std::size_t position;
};

// Closed-form scalar expression in a fixed set of named variables.
// Grammar: + - * / ^ (right associative), unary sign, parentheses, numbers,
// the constants pi and e, and the functions sin cos tan sinh cosh tanh atan
// exp log sqrt abs (one argument) and pow min max atan2 (two arguments).
class Expression {
public:
	Expression() = default;

	static Expression parse(const std::string &text, std::vector<std::string> variables);

	// `values` follows the order of the variable list given to parse().
	double operator()(const std::vector<double> &values) const;

	const std::string &text() const { return text_; }
	const std::vector<std::string> &variables() const { return variables_; }
	bool uses(const std::string &variable) const;
	bool empty() const { return nodes_.empty(); }

private:
	enum class Op { number, variable, neg, add, sub, mul, div, pow, call1, call2 };
	struct Node {
		Op op;
		double value = 0.0;
		int index = 0;       // variable slot or function id
		int lhs = -1, rhs = -1;
	};
	friend class ExpressionParser;

	double eval(int node, const std::vector<double> &values) const;

	std::string text_;
	std::vector<std::string> variables_;
	std::vector<Node> nodes_;
	int root_ = -1;
	std::vector<bool> used_;
};

} // namespace stripns
