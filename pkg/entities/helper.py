from typing import Any, Iterable

from common import indent


def indent_entity(entity: Any) -> str:
    """
    Convert an entity to a string, indent every line of the string with a space,
    and add a trailing newline.

    >>> indent_entity('(curve c1 "u")')
    ' (curve c1 "u")\\n'
    >>> indent_entity('(functional s (level 1)\\n (term f 1 1)\\n)')
    ' (functional s (level 1)\\n  (term f 1 1)\\n )\\n'
    """
    result = '\n'.join(indent(1, str(entity).splitlines()))
    result += '\n'
    return result


def indent_entities(entities: Iterable[Any]) -> str:
    """
    Indent every entity with `indent_entity` and concatenate the results.

    >>> indent_entities(['(flag f1 (curve c1))', '(flag f2 (curve "t"))'])
    ' (flag f1 (curve c1))\\n (flag f2 (curve "t"))\\n'
    """
    return ''.join(map(indent_entity, entities))


def block(head: str, entities: Iterable[Any]) -> str:
    """
    An entity with nested children, one per line.

    >>> block('universe u', ['(small 0 s)'])
    '(universe u\\n (small 0 s)\\n)'
    """
    return '({}\n{})'.format(head, indent_entities(entities))
