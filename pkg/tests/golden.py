"""Reference S-expressions: the sf8i2 block AST and the foo/baz translations."""

SF8I2_BLOCK = """
(BLOCK (DECLARE X (BITS (* -145 (EXPT 2 6)) 7 0))
       (LIST (DECLARE Y (BITS 100 7 0))
             (DECLARE Z (BITS 3 7 0)))
       (ASSIGN Z
               (BITS (FL (* (BITS Y 4 2)
                            (/ (INTVAL 8 X) (EXPT 2 6))))
                     7 0)))
"""

GOLDEN_FOO = """
(DEFUN FOO (X Y Z)
       (LET* ((U (+ Y Z)) (V (* U X)))
             (MV-LET (X Y Z) (BAR U V)
                     (LET ((Y (IF1 (LOG> X Y) (* 2 U) V)))
                          (MV-LET (V U)
                                  (IF1 (LOG>= X 0)
                                       (MV V (* 2 U))
                                       (MV (* 3 U) U))
                                  (IF1 (LOG< X Y) U (+ Y V)))))))
"""

GOLDEN_BAZ = """
(DEFUN BAZ-LOOP-0 (J V X U)
       (DECLARE (XARGS :MEASURE (NFIX (- J (1- -3)))))
       (IF (AND (INTEGERP J) (>= J -3))
           (LET ((ASSERT (IN-FUNCTION BAZ (> V 0)))
                 (U (+ X (* 3 U))))
                (BAZ-LOOP-0 (- J 1) V X U))
           U))

(DEFUN BAZ-LOOP-1 (I X V U)
       (DECLARE (XARGS :MEASURE (NFIX (- U I))))
       (IF (AND (INTEGERP I) (INTEGERP U) (INTEGERP V)
                (AND (< I U) (< U V)))
           (LET* ((V (- V 1)) (U (BAZ-LOOP-0 5 V X U)))
                 (BAZ-LOOP-1 (+ I 2) X V U))
           (MV V U)))

(DEFUN BAZ (X Y Z)
       (LET* ((U (+ Y Z)) (V (* U X)))
             (MV-LET (V U)
                     (BAZ-LOOP-1 0 X V U)
                     (+ U V))))
"""
