# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains the lexer and parser of the command-line mini-language:
- Operators: polynomials in the number operator `n` with rational
  coefficients, e.g. "n*(n-1)/2"
- Symbols: polynomials in `|z|^2`, e.g. "1/2*|z|^4 - |z|^2 + 1/4"
- Coefficient lists: explicit monomials, e.g. "(2,2): 1/2, (1,1): -1"
"""

import collections
import logging

import sympy

from cspi.symbols import NormalPoly, PhaseSymbol, SymbolKind

log = logging.getLogger(__name__)


class TokenError(ValueError):
    """
    Represents an error encountered during tokenization.
    """


class ParseError(ValueError):
    """
    Represents an error encountered during parsing.
    """


class Token:
    """
    Represents a token constructed by the lexer.
    """

    def __init__(self, col, token):
        self.col = col
        self.token = token

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}(col={self.col},token={self.token!r})"

    def __str__(self):
        return str(self.token)


class NumericalConstant(Token):
    """
    Represents an unsigned integer or decimal constant.
    """


class Identifier(Token):
    """
    Represents a variable name.
    """


class Modulus(Token):
    """
    Represents the modulus |z| of the phase-space variable.
    """


class Operator(Token):
    """
    Represents an arithmetic operator.
    """


class Punctuator(Token):
    """
    Represents parentheses and list separators.
    """


class Lexer:
    """
    A lexer for the mini-language.
    """

    def __init__(self, string):
        self.string = string
        self.pos = 0

    def read(self, n=1):
        """
        Return the next n characters in the string.
        """
        return self.string[self.pos : self.pos + n]

    def eos(self):
        """
        Return True when the end of the string is reached.
        """
        return self.pos == len(self.string)

    def whitespace(self):
        """
        Consume whitespace and advance position.
        """
        while not self.eos() and self.read() in [" ", "\t", "\n", "\r"]:
            self.pos += 1

    def match_any(self, literals):
        """
        Match one from a list of character/string literals exactly.
        Return the matched index and advance position.
        """
        for index, literal in enumerate(literals):
            if self.read(len(literal)) == literal:
                self.pos += len(literal)
                return index

        raise TokenError()

    def number(self):
        """
        Construct a NumericalConstant by parsing a string.

        <number> := <digit>+['.'<digit>+]?
        """
        col = self.pos
        chars = []
        while not self.eos() and self.read().isdigit():
            chars.append(self.read())
            self.pos += 1
        if not chars:
            raise TokenError("Expected digit.")
        if self.read() == ".":
            self.pos += 1
            fraction = []
            while not self.eos() and self.read().isdigit():
                fraction.append(self.read())
                self.pos += 1
            if not fraction:
                self.pos = col
                raise TokenError("Invalid decimal constant.")
            chars += ["."] + fraction
        return NumericalConstant(col, "".join(chars))

    def identifier(self):
        """
        Construct an Identifier by parsing a string.

        <identifier> := <alpha>[<alpha>|<digit>|'_']*
        """
        col = self.pos
        if not self.read().isalpha():
            raise TokenError("Invalid identifier.")
        chars = []
        while not self.eos() and (
            self.read().isalnum() or self.read() == "_"
        ):
            chars.append(self.read())
            self.pos += 1
        return Identifier(col, "".join(chars))

    def modulus(self):
        """
        Construct a Modulus token.

        <modulus> := '|z|'
        """
        col = self.pos
        self.match_any(["|z|"])
        return Modulus(col, "|z|")

    def operator(self):
        """
        Construct an Operator by parsing a string.
        '**' is read as a synonym of '^'.

        <op> := ['+' | '-' | '*' | '/' | '^' | '**']
        """
        col = self.pos
        operators = ["**", "+", "-", "*", "/", "^"]
        try:
            index = self.match_any(operators)
        except TokenError:
            self.pos = col
            raise TokenError("Invalid operator.")
        token = operators[index]
        return Operator(col, "^" if token == "**" else token)

    def punctuator(self):
        """
        Construct a Punctuator by parsing a string.

        <punc> := ['(' | ')' | ',' | ':']
        """
        col = self.pos
        punctuators = ["(", ")", ",", ":"]
        try:
            index = self.match_any(punctuators)
        except TokenError:
            self.pos = col
            raise TokenError("Invalid punctuator.")
        return Punctuator(col, punctuators[index])

    def tokenize_one(self):
        """
        Consume and return next token. Returns None if not possible.
        """
        candidates = [
            self.number,
            self.identifier,
            self.modulus,
            self.operator,
            self.punctuator,
        ]
        for f in candidates:
            col = self.pos
            try:
                return f()
            except TokenError:
                self.pos = col
        return None

    def tokenize(self):
        """
        Return a list of all tokens in the string.
        """
        tokens = []
        self.whitespace()
        while not self.eos():
            token = self.tokenize_one()
            if token is None:
                raise TokenError(
                    f"Unexpected character '{self.read()}' at column "
                    + f"{self.pos + 1} of '{self.string}'.",
                )
            tokens.append(token)
            self.whitespace()
        return tokens


class Algebra:
    """
    The values an expression evaluates to: how constants and variables are
    lifted, and which variables exist.
    """

    def constant(self, value):
        raise NotImplementedError

    def variable(self, parser, token):
        raise NotImplementedError

    @staticmethod
    def as_number(value):
        """
        Return the exact number held by a constant value, or None.
        """
        coeffs = value.coeffs
        if set(coeffs) - {(0, 0)}:
            return None
        return value.constant


class OperatorAlgebra(Algebra):
    """
    Polynomials in the number operator n, multiplied as operators.
    """

    def constant(self, value):
        return NormalPoly.constant_term(value)

    def variable(self, parser, token):
        if token.token == "n":
            return NormalPoly.number()
        raise ParseError(
            f"Unknown operator '{token.token}' at column {token.col + 1}; "
            + "only 'n' is recognized.",
        )


class SymbolAlgebra(Algebra):
    """
    Polynomials in |z|^2, multiplied pointwise.
    """

    def __init__(self, kind: SymbolKind):
        self.kind = kind

    def constant(self, value):
        return PhaseSymbol({(0, 0): value}, self.kind)

    def variable(self, parser, token):
        if not isinstance(token, Modulus):
            raise ParseError(
                f"Unknown variable '{token.token}' at column "
                + f"{token.col + 1}; symbols are polynomials in |z|^2.",
            )
        try:
            parser.match_value(Operator, "^")
            exponent = parser.match_type(NumericalConstant)
        except ParseError:
            raise ParseError(
                f"|z| at column {token.col + 1} must be raised to an even "
                + "power.",
            )
        power = sympy.Rational(exponent.token)
        if not power.is_integer or power % 2 != 0:
            raise ParseError(
                f"|z|^{exponent.token} at column {token.col + 1} is not a "
                + "polynomial in |z|^2.",
            )
        return PhaseSymbol({(int(power) // 2, int(power) // 2): 1}, self.kind)


class Parser:
    """
    A generic token parser for matching tokens from a list.
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def cursor(self):
        """
        Return the current token in the list.
        """
        try:
            return self.tokens[self.pos]
        except IndexError:
            raise ParseError("Unexpected end of input.")

    def eol(self):
        """
        Return True when the end of the list is reached.
        """
        return self.pos == len(self.tokens)

    def match_type(self, token_type):
        """
        Match a token of the specified type and advance position.
        """
        if isinstance(self.cursor(), token_type):
            token = self.cursor()
            self.pos += 1
        else:
            name = getattr(token_type, "__name__", "token")
            raise ParseError(f"Expected {name}.")
        return token

    def match_value(self, token_type, token_value):
        """
        Match a token of the specified type and value, and advance
        position.
        """
        if (
            isinstance(self.cursor(), token_type)
            and self.cursor().token == token_value
        ):
            token = self.cursor()
            self.pos += 1
        else:
            raise ParseError(f"Expected {token_value!s}.")
        return token

    def position(self):
        """
        Return a human-readable description of the cursor position.
        """
        if self.eol():
            return "end of input"
        return f"column {self.cursor().col + 1}"


class ExpressionEvaluator(Parser):
    """
    A specialized token parser for evaluating polynomial expressions.
    """

    # Lower numbers = lower precedence
    OpInfo = collections.namedtuple("OpInfo", ["prec", "assoc"])
    UnaryOperators = {
        "-": OpInfo(12, "RIGHT"),
        "+": OpInfo(12, "RIGHT"),
    }
    BinaryOperators = {
        "+": OpInfo(10, "LEFT"),
        "-": OpInfo(10, "LEFT"),
        "*": OpInfo(11, "LEFT"),
        "/": OpInfo(11, "LEFT"),
        "^": OpInfo(13, "RIGHT"),
    }

    def __init__(self, tokens, algebra: Algebra):
        super().__init__(tokens)
        self.algebra = algebra

    def term(self):
        """
        Match a constant or variable.

        <term> := [<number>|<identifier>|<modulus>]
        """
        initial_pos = self.pos

        try:
            constant = self.match_type(NumericalConstant)
            return self.algebra.constant(sympy.Rational(constant.token))
        except ParseError:
            self.pos = initial_pos

        try:
            token = self.match_type((Identifier, Modulus))
        except ParseError:
            raise ParseError(
                f"Expected a number or variable at {self.position()}.",
            )
        return self.algebra.variable(self, token)

    def primary(self):
        """
        Match a simple expression.

        <primary> := [<unary-op><expression>|'('<expression>')'|<term>]
        """
        if self.eol():
            raise ParseError("Unexpected end of expression.")

        token = self.cursor()
        if (
            isinstance(token, Operator)
            and token.token in ExpressionEvaluator.UnaryOperators
        ):
            self.pos += 1
            (prec, _) = ExpressionEvaluator.UnaryOperators[token.token]
            expr = self.expression(prec)
            return -expr if token.token == "-" else expr

        if isinstance(token, Punctuator) and token.token == "(":
            self.pos += 1
            expr = self.expression()
            try:
                self.match_value(Punctuator, ")")
            except ParseError:
                raise ParseError(f"Expected ')' at {self.position()}.")
            return expr

        return self.term()

    def expression(self, min_precedence=0):
        """
        Match an expression by precedence climbing.

        <expression> := <primary>[<binary-op><expression>]*
        """
        expr = self.primary()

        while (
            not self.eol()
            and isinstance(self.cursor(), Operator)
            and self.cursor().token in ExpressionEvaluator.BinaryOperators
            and (
                ExpressionEvaluator.BinaryOperators[self.cursor().token].prec
                >= min_precedence
            )
        ):
            operator = self.match_type(Operator)
            (prec, assoc) = ExpressionEvaluator.BinaryOperators[operator.token]

            # Minimum precedence for right-hand side depends on
            # associativity
            if assoc == "LEFT":
                rhs = self.expression(prec + 1)
            else:
                rhs = self.expression(prec)

            expr = self.__apply_binary_op(operator, expr, rhs)

        return expr

    def __apply_binary_op(self, operator, lhs, rhs):
        """
        Apply the specified binary operator: lhs op rhs
        """
        op = operator.token
        if op == "+":
            return lhs + rhs
        elif op == "-":
            return lhs - rhs
        elif op == "*":
            return lhs * rhs

        value = self.algebra.as_number(rhs)
        if op == "/":
            if value is None or value == 0:
                raise ParseError(
                    f"Division at column {operator.col + 1} requires a "
                    + "non-zero numerical divisor.",
                )
            return lhs / value
        elif op == "^":
            if value is None or not value.is_integer or value < 0:
                raise ParseError(
                    f"Exponent at column {operator.col + 1} must be a "
                    + "non-negative integer.",
                )
            return lhs ** int(value)
        raise ParseError(f"Unknown operator '{op}'.")

    def evaluate(self):
        """
        Evaluate the whole token list as one expression.
        """
        expr = self.expression()
        if not self.eol():
            raise ParseError(
                f"Unexpected '{self.cursor()}' at {self.position()}.",
            )
        return expr


class CoefficientListParser(Parser):
    """
    A specialized token parser for explicit monomial lists.
    """

    def index(self):
        token = self.match_type(NumericalConstant)
        if not token.token.isdigit():
            raise ParseError(
                f"Monomial powers must be integers (column {token.col + 1}).",
            )
        return int(token.token)

    def pair(self):
        """
        Match one monomial and its coefficient.

        <pair> := '('<int>','<int>')'':'<expression>
        """
        try:
            self.match_value(Punctuator, "(")
            j = self.index()
            self.match_value(Punctuator, ",")
            k = self.index()
            self.match_value(Punctuator, ")")
            self.match_value(Punctuator, ":")
        except ParseError as e:
            raise ParseError(f"Invalid monomial at {self.position()}: {e}")

        # The coefficient runs up to the next ',' at depth zero.
        start = self.pos
        depth = 0
        while not self.eol():
            token = self.cursor()
            if isinstance(token, Punctuator):
                if token.token == "(":
                    depth += 1
                elif token.token == ")":
                    depth -= 1
                elif token.token == "," and depth == 0:
                    break
            self.pos += 1
        evaluator = ExpressionEvaluator(
            self.tokens[start : self.pos],
            SymbolAlgebra(SymbolKind.WICK),
        )
        value = evaluator.algebra.as_number(evaluator.evaluate())
        if value is None:
            raise ParseError(f"Coefficient of ({j},{k}) must be a number.")
        return (j, k), value

    def coefficients(self):
        """
        <coefficient-list> := <pair>[','<pair>]*
        """
        coeffs = {}
        while True:
            key, value = self.pair()
            coeffs[key] = coeffs.get(key, sympy.Integer(0)) + value
            if self.eol():
                return coeffs
            self.match_value(Punctuator, ",")


def parse_operator(text: str) -> NormalPoly:
    """
    Parse a polynomial in `n` into its normal-ordered form.

    Raises
    ------
    TokenError, ParseError
        If `text` is not a polynomial in n with rational coefficients.
    """
    tokens = Lexer(text).tokenize()
    result = ExpressionEvaluator(tokens, OperatorAlgebra()).evaluate()
    log.debug(f"parsed operator '{text}' as {result}")
    return result


def parse_symbol(text: str, kind: SymbolKind) -> PhaseSymbol:
    """
    Parse a polynomial in |z|^2 as a symbol of the given kind.

    Raises
    ------
    TokenError, ParseError
        If `text` is not a polynomial in |z|^2 with rational coefficients.
    """
    tokens = Lexer(text).tokenize()
    result = ExpressionEvaluator(tokens, SymbolAlgebra(kind)).evaluate()
    log.debug(f"parsed {kind.value} symbol '{text}' as {result}")
    return result


def parse_coefficients(text: str) -> dict[tuple[int, int], sympy.Expr]:
    """
    Parse an explicit list "(j,k): c, ..." of monomial coefficients.

    Raises
    ------
    TokenError, ParseError
        If `text` is not a well-formed list.
    """
    tokens = Lexer(text).tokenize()
    if not tokens:
        raise ParseError("Empty coefficient list.")
    return CoefficientListParser(tokens).coefficients()
