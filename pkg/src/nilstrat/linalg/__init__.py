"""Exact matrices over QQ and QQ(u_1, ..., u_m) and the Pfaffian."""
