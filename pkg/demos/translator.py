"""
Translator cycles
=================

Bottom monomers b_i and top monomers t_i sit in pairs {b_i, t_i}. A free
top t_{c-1} can walk around the cycle and leave every bottom paired with its
predecessor's top. Without that catalyst the switch needs a high path.
"""
from fractions import Fraction

from tbnbarrier import barrier
from tbnbarrier.constructions import (
    TranslatorSpec,
    configuration_offset,
    gen_translator,
    translator_catalyzed_path,
    translator_cheat_path,
)

net = gen_translator(TranslatorSpec(3, 5, extra_catalysts=1))
path = translator_catalyzed_path(net)
print(f"(3,5) with a catalyst: {len(path) - 1} moves, height {path.height(2)}")

net = gen_translator(TranslatorSpec(2, 4))
res = barrier(net.tbn, net.initial, net.triggered, w=2)
print(f"(2,4) exact barrier {res.barrier}, lower bound {Fraction(4, 5)}")
print("offsets: initial", configuration_offset(net.initial, 2), "triggered", configuration_offset(net.triggered, 2))

# the route that gathers z tops at a time; its measured height is printed next to 2c/z
for z, c in ((2, 4), (3, 9)):
    cheat = translator_cheat_path(gen_translator(TranslatorSpec(z, c)))
    print(f"({z},{c}) grouped path: height {cheat.height(2)}, 2c/z = {Fraction(2 * c, z)}, "
          f"saturated throughout: {cheat.is_saturated()}")
