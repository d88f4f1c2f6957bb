__version__ = "1.0.0"
__license__ = "MIT"
__author__ = "The lowhigh authors"
__email__ = ""
__url__ = ""
