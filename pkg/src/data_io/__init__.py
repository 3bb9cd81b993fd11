from src.data_io.libsvm import format_libsvm_line, parse_libsvm_line, write_libsvm
from src.data_io.sample import Sample
from src.data_io.stream import Stream, StreamSpec, build_stream

__all__ = [
    "Sample",
    "Stream",
    "StreamSpec",
    "build_stream",
    "format_libsvm_line",
    "parse_libsvm_line",
    "write_libsvm",
]
