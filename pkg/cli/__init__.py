from .main import main, build_parser, parse_do
