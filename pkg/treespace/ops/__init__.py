# treespace/ops/__init__.py

from .tree import *
from .space import *
from .dual import *
from .signs import *
from .daugavet import *
from .renorming import *
from .continuity import *
from .infinite import *
from .pibase import *
from .adequate import *
