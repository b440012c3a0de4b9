from collections import namedtuple


GsmTestCase = namedtuple('GsmTestCase', ('k1', 'k2', 'gap', 'length', 'y', 'force', 'stiffness'))
gsm_tests = [
                GsmTestCase(100, 30, 0.05, 0.2, 0.1, 5.732050807568877, 63.09401076758503),
                GsmTestCase(100, 30, 0.05, 0.2, 0.0, 0.0, 40 + 60 * 0.05 / 0.2),
                GsmTestCase(100, 50, 0.0, 0.2, 0.15, 0.0, 0.0),
                GsmTestCase(100, 0, 0.0, 0.2, -0.1, -10.0, 100.0),
                GsmTestCase(0, 40, 0.0, 1.0, 0.5, -40.0, -80.0),
                ]

QzsTestCase = namedtuple('QzsTestCase', ('k1', 'k2', 'expected'))
qzs_tests = [
                QzsTestCase(100, 50, True),
                QzsTestCase(100, 50 + 1e-9, True),
                QzsTestCase(100, 50.001, False),
                QzsTestCase(100, 30, False),
                QzsTestCase(-100, -50, True),
                ]

ParseTestCase = namedtuple('ParseTestCase', ('text', 'coefficients'))
polynomial_parse_tests = [
                ParseTestCase('5000*X^3', (0, 0, 0, 5000)),
                ParseTestCase('-5000 * X ^ 3', (0, 0, 0, -5000)),
                ParseTestCase('X^2', (0, 0, 1)),
                ParseTestCase('(X - 1)^2', (1, -2, 1)),
                ParseTestCase('2*X - 3*X', (0, -1)),
                ParseTestCase('-X^2', (0, 0, -1)),
                ParseTestCase('X/4 + 1.5e3', (1500, 0.25)),
                ParseTestCase('sqrt(4)*X', (0, 2)),
                ParseTestCase('X^(1+1)', (0, 0, 1)),
                ParseTestCase('2^-1', (0.5,)),
                ]

EvalTestCase = namedtuple('EvalTestCase', ('text', 'x', 'expected'))
expression_eval_tests = [
                EvalTestCase('sin(X)', 0.5, 0.479425538604203),
                EvalTestCase('X*exp(-X^2)', 1.0, 0.36787944117144233),
                EvalTestCase('tanh(X) + abs(X)', -1.0, 0.2384058440442351),
                EvalTestCase('1/X', 4.0, 0.25),
                EvalTestCase('cos(X)^2 + sin(X)^2', 0.3, 1.0),
                ]

ParseFailTestCase = namedtuple('ParseFailTestCase', ('text', 'offset', 'expected'))
parse_fail_tests = [
                ParseFailTestCase('5000*X^', 7, 'X'),
                ParseFailTestCase('3 $ X', 2, '('),
                ParseFailTestCase('(X + 1', 6, ')'),
                ParseFailTestCase('foo(X)', 0, 'sin'),
                ParseFailTestCase('X X', 2, '*'),
                ParseFailTestCase('', 0, 'X'),
                ParseFailTestCase('5000*x^3', 5, 'X'),
                ]

exponent_fail_tests = [
                ('X^2.5', 2),
                ('X^X', 2),
                ('X^(0.5*2.5)', 2),
                ('2*X^-sin(X)', 4),
                ]

DomainTestCase = namedtuple('DomainTestCase', ('label', 'domain', 'kinds'))
softening_domains = [
                DomainTestCase('Y11', (-0.1414213562373095, 0.1414213562373095), ('RootTouch', 'RootTouch')),
                DomainTestCase('Y21', (-0.1414213562373095, 0.1414213562373095), ('RootTouch', 'RootTouch')),
                DomainTestCase('Y12', (-0.18612097182041991, 0.18612097182041991), ('TravelLimit', 'TravelLimit')),
                DomainTestCase('Y22', (-0.18612097182041991, 0.18612097182041991), ('TravelLimit', 'TravelLimit')),
                DomainTestCase('Y14', (-0.2, 0.2), ('TravelLimit', 'TravelLimit')),
                DomainTestCase('Y24', (-0.2, 0.2), ('TravelLimit', 'TravelLimit')),
                ]

quadratic_domains = [
                DomainTestCase('Y11', (-1.6509636244473134, 1.1447142425533319), ('TravelLimit', 'RootTouch')),
                DomainTestCase('Y12', (-1.1447142425533319, 1.6509636244473134), ('RootTouch', 'TravelLimit')),
                DomainTestCase('Y13', (-1.8171205928321397, 0.0), ('TravelLimit', 'Origin')),
                DomainTestCase('Y14', (0.0, 1.8171205928321397), ('Origin', 'TravelLimit')),
                ]
