"""Words over {F, F^-1, s, s^-1} and their text grammar.

A word is a tuple of letters: +1 = F, -1 = F^-1, +2 = s, -2 = s^-1.

Grammar (whitespace ignored):

    word := term*
    term := atom ['^' expo]
    expo := ['-'] digits | '(' ['-'] digits ')' | term
    atom := 'F' | 's' | '(' word ')' | '[' word ',' word ']'

An exponent that is itself a word means conjugation, a^b = b a b^-1.
Commutators follow [a, b] = a b a^-1 b^-1.  Exponent words associate to
the right, so F^s^2 reads as F^(s^2).
"""

import warnings

from .errors import WordSyntaxError, ZeroExponentWarning

F, Fi, S, Si = 1, -1, 2, -2
_NAMES = {F: "F", Fi: "F^-1", S: "s", Si: "s^-1"}


def inverse(w):
    return tuple(-x for x in reversed(w))


def power(w, k):
    if k < 0:
        w, k = inverse(w), -k
    return w * k


def conj(a, b):
    """a^b = b a b^-1."""
    return b + a + inverse(b)


def comm(a, b):
    """[a, b] = a b a^-1 b^-1."""
    return a + b + inverse(a) + inverse(b)


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def to_text(w):
    """Compact text that parses back to the same letter sequence."""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = j - i
        base = "F" if abs(w[i]) == 1 else "s"
        e = n if w[i] > 0 else -n
        parts.append(base if e == 1 else f"{base}^{e}")
        i = j
    return " ".join(parts)


def s_shift(w):
    """Total s-exponent and the largest |prefix s-exponent|."""
    x = m = 0
    for a in w:
        if a == S:
            x += 1
        elif a == Si:
            x -= 1
        m = max(m, abs(x))
    return x, m


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise WordSyntaxError(msg, self.pos)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self, stops):
        out = ()
        while True:
            c = self.peek()
            if c == "" or c in stops:
                return out
            out += self.term()

    def term(self):
        a = self.atom()
        if self.peek() == "^":
            self.pos += 1
            kind, val = self.expo()
            if kind == "int":
                if val == 0:
                    warnings.warn(f"zero exponent at position {self.pos}",
                                  ZeroExponentWarning, stacklevel=4)
                return power(a, val)
            return conj(a, val)
        return a

    def integer(self):
        self.skip()
        t = self.text
        start = self.pos
        if self.pos < len(t) and t[self.pos] in "+-":
            self.pos += 1
        self.skip()
        d0 = self.pos
        while self.pos < len(t) and t[self.pos].isdigit():
            self.pos += 1
        if self.pos == d0:
            self.pos = start
            self.error("expected an integer")
        return int(t[start:self.pos].replace(" ", ""))

    def expo(self):
        c = self.peek()
        if c in "+-" or c.isdigit():
            return "int", self.integer()
        if c == "(":
            # "(digits)" is an integer exponent, anything else a word
            save = self.pos
            self.pos += 1
            c2 = self.peek()
            if c2 in "+-" or c2.isdigit():
                n = self.integer()
                if self.peek() == ")":
                    self.pos += 1
                    return "int", n
            self.pos = save
        if c == "":
            self.error("missing exponent")
        return "word", self.term()

    def atom(self):
        c = self.peek()
        if c == "F":
            self.pos += 1
            return (F,)
        if c == "s":
            self.pos += 1
            return (S,)
        if c == "(":
            self.pos += 1
            w = self.word(")")
            self.take(")")
            return w
        if c == "[":
            self.pos += 1
            a = self.word(",]")
            self.take(",")
            b = self.word(",]")
            self.take("]")
            return comm(a, b)
        if c == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {c!r}")


def parse_word(text):
    p = _Parser(text)
    w = p.word("")
    if p.peek() != "":
        p.error("trailing input")
    return w


def as_word(w):
    return parse_word(w) if isinstance(w, str) else tuple(w)


def names(w):
    return [_NAMES[x] for x in w]
