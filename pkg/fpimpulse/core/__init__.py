# Core utilities and shared functionality

from .config import *
from .errors import *
from .utils import *
from .version import *
