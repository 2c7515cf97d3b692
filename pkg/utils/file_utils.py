import sys
import tempfile
from pathlib import Path

SESSION_EXTENSIONS = ['.trace', '.session', '.txt']


def get_file_type(filename: str) -> str:
    """
    Determine what kind of input a file holds from its extension

    Args:
        filename: Name of the file

    Returns:
        'session' for session scripts, 'json' for saved reports, 'unknown' otherwise
    """
    extension = Path(filename).suffix.lower()
    if extension in SESSION_EXTENSIONS:
        return 'session'
    elif extension == '.json':
        return 'json'
    else:
        return 'unknown'


def read_session(path: str) -> str:
    """
    Read a session script from a file, or from stdin when path is '-'

    Args:
        path: File path or '-'

    Returns:
        The script text with line endings normalized
    """
    try:
        if path == '-':
            text = sys.stdin.read()
        else:
            text = Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise Exception(f"Session file {path} is not UTF-8: {str(e)}")
    except OSError as e:
        raise Exception(f"Error reading session file {path}: {str(e)}")
    return clean_text(text)


def save_uploaded_file(uploaded_file) -> str:
    """
    Save an uploaded session to a temporary file

    Args:
        uploaded_file: Streamlit uploaded file object

    Returns:
        Path to saved temporary file
    """
    try:
        suffix = Path(uploaded_file.name).suffix or SESSION_EXTENSIONS[0]
        temp_file = tempfile.NamedTemporaryFile(delete=False, suffix=suffix)
        temp_file.write(uploaded_file.getvalue())
        temp_file.close()
        return temp_file.name
    except Exception as e:
        raise Exception(f"Error saving uploaded file: {str(e)}")


def format_duration(ms: float) -> str:
    """
    Format a wall-clock duration in human-readable form

    Args:
        ms: Duration in milliseconds

    Returns:
        Formatted duration string
    """
    if ms < 1000:
        return f"{ms:.0f} ms"
    seconds = ms / 1000.0
    if seconds < 60:
        return f"{seconds:.1f} s"
    return f"{int(seconds // 60)} min {seconds % 60:.0f} s"


def clean_text(text: str) -> str:
    """
    Normalize script text: line endings, null bytes and a leading byte-order mark

    Args:
        text: Raw text content

    Returns:
        Cleaned text; line structure is kept so diagnostics point at the right line
    """
    if not text:
        return ""
    text = text.lstrip('\ufeff')
    text = text.replace('\x00', '').replace('\r\n', '\n').replace('\r', '\n')
    return text
