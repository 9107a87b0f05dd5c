from .exterior import KForm, Vector, hodge, interior, wedge
from .spin7 import cayley_form, check_admissible, lee_form
from .classify import classify_lie, classify_product, solve_lee
