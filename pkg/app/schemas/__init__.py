"""Pydantic models for the classifier domain types"""
