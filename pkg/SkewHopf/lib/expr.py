'''
Text form of polynomials, the inverse of str(NCPoly):

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := coeff ('*'? factor)? ('*' factor)* | factor ('*' factor)*
    factor := 'x[' int ',' id ',' id ']' | '1' | '(' expr ')'
    coeff  := integer | integer '/' positive-integer

Whitespace is insignificant. Error offsets are 1-based; the end of input is len(text) + 1.
'''
from __future__ import annotations
import re
from typing import Iterator, List, NamedTuple
from gmpy2 import mpq
from SkewHopf.lib.chain import ChainException, ValidatedChain
from SkewHopf.lib.ncpoly import NCPoly, ValidationException, letter

TOKEN_SPEC = [
    ('NUM', r'\d+'),
    ('NAME', r'[A-Za-z_][A-Za-z0-9_]*'),
    ('OP', r'[-+*/()\[\],]'),
    ('SKIP', r'\s+'),
    ('BAD', r'.'),
]
TOKEN_REGEX = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))

class ParseException(ValidationException):
    def __init__(self, message: str, offset: int, code: str = 'PARSE_ERROR'):
        self.offset = offset
        super().__init__(code, f'{message} at offset {offset}')

class Token(NamedTuple):
    type: str
    value: str
    offset: int # 1-based

def tokenize(text: str) -> Iterator[Token]:
    for mo in TOKEN_REGEX.finditer(text):
        kind = mo.lastgroup
        if kind == 'SKIP':
            continue
        if kind == 'BAD':
            raise ParseException(f'unexpected character {mo.group()!r}', mo.start() + 1)
        yield Token(kind, mo.group(), mo.start() + 1)
    yield Token('END', '', len(text) + 1)

class Parser:
    tokens: List[Token]
    pos: int

    def __init__(self: Parser, text: str, chain: ValidatedChain = None):
        self.tokens = list(tokenize(text))
        self.pos = 0
        self.chain = chain

    @property
    def peek(self: Parser) -> Token:
        return self.tokens[self.pos]

    def advance(self: Parser, value: str = None) -> Token:
        token = self.peek
        if value is not None and token.value != value:
            found = 'end of input' if token.type == 'END' else repr(token.value)
            raise ParseException(f"expected '{value}', found {found}", token.offset)
        if token.type == 'END' and value is None:
            raise ParseException('unexpected end of input', token.offset)
        self.pos += 1
        return token

    def at(self: Parser, *values: str) -> bool:
        return self.peek.type == 'OP' and self.peek.value in values

    def parse(self: Parser) -> NCPoly:
        res = self.expr()
        if self.peek.type != 'END':
            raise ParseException(f'unexpected {self.peek.value!r}', self.peek.offset)
        return res

    def expr(self: Parser) -> NCPoly:
        sign = 1
        if self.at('+', '-'):
            sign = -1 if self.advance().value == '-' else 1
        res = self.term().scale(sign)
        while self.at('+', '-'):
            sign = -1 if self.advance().value == '-' else 1
            res = res + self.term().scale(sign)
        return res

    def coeff(self: Parser) -> mpq:
        num = int(self.advance().value)
        if not self.at('/'):
            return mpq(num)
        self.advance('/')
        token = self.peek
        if token.type != 'NUM':
            raise ParseException('expected a positive denominator', token.offset)
        self.advance()
        if int(token.value) == 0:
            raise ParseException('zero denominator', token.offset)
        return mpq(num, int(token.value))

    def starts_factor(self: Parser) -> bool:
        return self.at('(') or (self.peek.type == 'NAME' and self.peek.value == 'x') or \
            (self.peek.type == 'NUM' and self.peek.value == '1')

    def term(self: Parser) -> NCPoly:
        if self.peek.type == 'NUM':
            res = NCPoly.constant(self.coeff())
            if self.at('*'):
                self.advance('*')
                res = res * self.factor()
            elif self.starts_factor():
                res = res * self.factor()
        else:
            res = self.factor()
        while self.at('*'):
            self.advance('*')
            res = res * self.factor()
        return res

    def integer(self: Parser) -> int:
        sign = -1 if self.at('-') and self.advance() else 1
        token = self.peek
        if token.type != 'NUM':
            raise ParseException('expected an integer level', token.offset)
        self.advance()
        return sign * int(token.value)

    def index(self: Parser) -> str:
        token = self.peek
        if token.type not in ('NUM', 'NAME'):
            raise ParseException('expected an index id', token.offset)
        self.advance()
        if self.chain is not None and token.value not in self.chain.position:
            raise ParseException(f'index {token.value!r} is not in the chain', token.offset, 'UNKNOWN_INDEX')
        return token.value

    def factor(self: Parser) -> NCPoly:
        token = self.peek
        if self.at('('):
            self.advance('(')
            res = self.expr()
            self.advance(')')
            return res
        if token.type == 'NUM':
            if token.value != '1':
                raise ParseException(f'only 1 may appear as a constant factor, found {token.value}', token.offset)
            self.advance()
            return NCPoly.constant(1)
        if token.type == 'NAME' and token.value == 'x':
            self.advance()
            self.advance('[')
            level_offset = self.peek.offset
            level = self.integer()
            if self.chain is not None and not self.chain.in_window(level):
                raise ParseException(f'level {level} outside window [{self.chain.lo},{self.chain.hi}]',
                                     level_offset, 'LEVEL_OUT_OF_WINDOW')
            self.advance(',')
            row = self.index()
            self.advance(',')
            col = self.index()
            self.advance(']')
            l = letter(level, row, col)
            if self.chain is not None:
                try:
                    self.chain.check_letter(l)
                except ChainException as e:
                    raise ParseException(e.message, token.offset, e.code)
            return NCPoly.from_letter(l)
        found = 'end of input' if token.type == 'END' else repr(token.value)
        raise ParseException(f'expected a factor, found {found}', token.offset)

def parse_expr(text: str, chain: ValidatedChain = None) -> NCPoly:
    '''
    parses text into an NCPoly. with a chain, every letter is checked against it.
    '''
    return Parser(text, chain).parse()
