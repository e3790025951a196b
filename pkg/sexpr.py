"""
Reader for the S-expression syntax of scenario files.

Lists become `SList` (remembering where they started), quoted strings
become `SString` and everything else stays a plain `str` atom. Comments run
from `;` to the end of the line.
"""
import threading

from typing import List, Optional, Sequence, Tuple, Union

from arpeggio import EOF, NoMatch, ParserPython
from arpeggio import RegExMatch as _
from arpeggio import Terminal, ZeroOrMore

from common import escape_string, unescape_string


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__('{} at line {}, column {}'.format(message, line, column))
        self.line = line
        self.column = column


class SString(str):
    """A quoted string."""


class SList(list):  # type: ignore[type-arg]
    def __init__(self, items: Sequence['Item'] = (), position: Tuple[int, int] = (0, 0)):
        super().__init__(items)
        self.position = position

    @property
    def head(self) -> str:
        if not self or isinstance(self[0], (SList, SString)):
            raise self.error('Expected a list starting with a symbol')
        return str(self[0])

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.position[0], self.position[1])

    def children(self, head: str) -> List['SList']:
        return [item for item in self if isinstance(item, SList) and item and item[0] == head]

    def child(self, head: str) -> Optional['SList']:
        found = self.children(head)
        if len(found) > 1:
            raise self.error('Duplicate ({} ...)'.format(head))
        return found[0] if found else None


Item = Union[str, SString, SList]


def comment():  # type: ignore[no-untyped-def]
    return _(r';[^\n]*')


def string():  # type: ignore[no-untyped-def]
    return _(r'"(\\.|[^"\\])*"')


def atom():  # type: ignore[no-untyped-def]
    return _(r'[^\s()";]+')


def sexpr():  # type: ignore[no-untyped-def]
    return '(', ZeroOrMore([sexpr, string, atom]), ')'


def document():  # type: ignore[no-untyped-def]
    return ZeroOrMore(sexpr), EOF


_PARSER = None
_PARSER_LOCK = threading.Lock()


def _get_parser() -> ParserPython:
    global _PARSER
    with _PARSER_LOCK:
        if _PARSER is None:
            _PARSER = ParserPython(document, comment)
        return _PARSER


def _convert(node: object, parser: ParserPython) -> List[Item]:
    name = getattr(node, 'rule_name', '')
    if name == 'string':
        return [SString(unescape_string(str(node.value)[1:-1]))]  # type: ignore[attr-defined]
    if name == 'atom':
        return [str(node.value)]  # type: ignore[attr-defined]
    if isinstance(node, Terminal):
        return []
    items: List[Item] = []
    for child in node:  # type: ignore[attr-defined]
        items += _convert(child, parser)
    if name == 'sexpr':
        return [SList(items, parser.pos_to_linecol(node.position))]  # type: ignore[attr-defined]
    return items


def parse(text: str) -> List[SList]:
    """
    Parse a document into its top-level lists.

    >>> parse('(a "b c" (d 1)) ; note')
    [['a', 'b c', ['d', '1']]]
    """
    parser = _get_parser()
    with _PARSER_LOCK:
        try:
            tree = parser.parse(text)
        except NoMatch as error:
            line, column = parser.pos_to_linecol(error.position)
            raise ParseError('Unexpected input', line, column) from error
        return [item for item in _convert(tree, parser) if isinstance(item, SList)]


def format_item(item: Item) -> str:
    """
    Serialize a parsed item back to text on one line.

    >>> format_item(SList(['cpair', 's', SString('x y')]))
    '(cpair s "x y")'
    """
    if isinstance(item, SList):
        return '({})'.format(' '.join(format_item(child) for child in item))
    if isinstance(item, SString):
        return '"{}"'.format(escape_string(item))
    return str(item)


def expect_atom(item: Item, context: SList) -> str:
    if isinstance(item, (SList, SString)):
        raise context.error('Expected a symbol, got {}'.format(format_item(item)))
    return str(item)


def expect_int(item: Item, context: SList) -> int:
    text = expect_atom(item, context)
    try:
        return int(text)
    except ValueError:
        raise context.error('Expected an integer, got {}'.format(text)) from None


def expect_string(item: Item, context: SList) -> str:
    if not isinstance(item, SString):
        raise context.error('Expected a quoted string, got {}'.format(format_item(item)))
    return str(item)


def expect_list(item: Item, context: SList) -> SList:
    if not isinstance(item, SList):
        raise context.error('Expected a list, got {}'.format(format_item(item)))
    return item
