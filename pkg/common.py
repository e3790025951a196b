"""
Common functionality for the scenario runner and the serializable entities.
"""
from os import makedirs, path

from typing import Iterable, List

# String escape sequences
STRING_ESCAPE_SEQUENCES = (
    ('\\', '\\\\'),  # Must be the first one to avoid recursion!
    ('\b', '\\b'),
    ('\f', '\\f'),
    ('\n', '\\n'),
    ('\r', '\\r'),
    ('\t', '\\t'),
    ('\v', '\\v'),
    ('"',  '\\"'),
)

# Yellow, used for warnings printed by the runner
WARNING_COLOR = '\033[1;33m'
RESET_COLOR = '\033[0m'


def escape_string(string: str) -> str:
    """
    Escape a string according to the S-expression escaping rules.
    """
    for search, replacement in STRING_ESCAPE_SEQUENCES:
        string = string.replace(search, replacement)
    return string


def unescape_string(string: str) -> str:
    """
    Reverse `escape_string`.

    >>> unescape_string('u \\\\"t\\\\"')
    'u "t"'
    >>> unescape_string(escape_string('a\\\\b\\n'))
    'a\\\\b\\n'
    """
    replacements = {escaped[1]: raw for raw, escaped in STRING_ESCAPE_SEQUENCES}
    result = []
    i = 0
    while i < len(string):
        char = string[i]
        if char == '\\' and i + 1 < len(string):
            result.append(replacements.get(string[i + 1], string[i + 1]))
            i += 2
        else:
            result.append(char)
            i += 1
    return ''.join(result)


def indent(level: int, lines: Iterable[str]) -> List[str]:
    """
    Indent the lines by the specified level.
    """
    return [' ' * level + line for line in lines]


def warn(message: str) -> None:
    print('{}Warning: {}{}'.format(WARNING_COLOR, message, RESET_COLOR))


def write_text_file(file_path: str, content: str) -> None:
    """
    Write a text file with unix line endings, creating parent directories.
    """
    directory = path.dirname(file_path)
    if directory and not path.isdir(directory):
        makedirs(directory)
    with open(file_path, 'w', newline='\n') as f:
        f.write(content)
