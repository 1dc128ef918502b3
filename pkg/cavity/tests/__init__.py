# Testes do motor de cascata
